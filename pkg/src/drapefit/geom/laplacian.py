"""Sparse mesh Laplacians (uniform graph and clamped cotangent)."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .mesh import TriMesh


def laplacian(mesh: TriMesh, kind: str = "uniform",
              normalized: bool = False) -> sp.csr_matrix:
    """Positive semi-definite Laplacian L with rows summing to zero.

    uniform:   L = D - A (symmetric).
    cotangent: w_ij = (cot a + cot b) / 2, clamped to >= 0 so obtuse
               triangulations cannot flip signs; symmetric as well.
    normalized=True divides each row by the vertex weight sum, so L @ x is
    x_i minus the (weighted) neighbor mean; this breaks symmetry.
    """
    if kind == "uniform":
        adj = mesh.adjacency.astype(np.float64)
        weights = adj
    elif kind == "cotangent":
        weights = _cotangent_weights(mesh)
    else:
        raise ValueError(f"unknown laplacian kind: {kind!r}")

    degree = np.asarray(weights.sum(axis=1)).ravel()
    lap = sp.diags(degree) - weights
    if normalized:
        inv = np.divide(1.0, degree, out=np.zeros_like(degree), where=degree > 0)
        lap = sp.diags(inv) @ lap
    return sp.csr_matrix(lap)


def _cotangent_weights(mesh: TriMesh) -> sp.csr_matrix:
    tri = mesh.triangles
    v = mesh.vertices
    rows, cols, vals = [], [], []
    for k in range(3):
        i = tri[:, (k + 1) % 3]
        j = tri[:, (k + 2) % 3]
        opp = tri[:, k]
        a = v[i] - v[opp]
        b = v[j] - v[opp]
        cross = np.linalg.norm(np.cross(a, b), axis=1)
        dot = np.einsum("ij,ij->i", a, b)
        cot = dot / np.maximum(cross, 1e-30)
        half = np.clip(0.5 * cot, 0.0, None)  # clamp: no negative weights
        rows.append(i)
        cols.append(j)
        vals.append(half)
        rows.append(j)
        cols.append(i)
        vals.append(half)
    n = mesh.n_vertices
    w = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n))
    return w.tocsr()
