"""Local rigidity energies over correspondence fields.

For each vertex, the relative difference vectors to its K-ring neighbors
are compared on both sides of the correspondence; the residual after the
best-fit rotation (SVD, determinant corrected to +1) measures how
non-rigidly the neighborhood maps, which is what flags left/right swaps.
"""
from __future__ import annotations

import numpy as np

from ..geom import TriMesh, k_ring_matrix

MIN_SUPPORT = 3  # fewer valid neighbors: energy 0, low-support flag


def fit_rotation(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Best rotation R minimizing sum ||q_j - R p_j||^2 for one neighborhood."""
    h = p.T @ q  # sum of p_j q_j^T
    u, _, vt = np.linalg.svd(h)
    r = vt.T @ u.T
    if np.linalg.det(r) < 0:
        vt = vt.copy()
        vt[-1] *= -1
        r = vt.T @ u.T
    return r


def rotation_fit_energy(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, float]:
    """(R, residual energy) for one neighborhood's difference vectors."""
    r = fit_rotation(p, q)
    resid = q - p @ r.T
    return r, float((resid ** 2).sum())


def arap_energies(source_positions: np.ndarray, target_positions: np.ndarray,
                  valid: np.ndarray, rings) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex deformation energies over a K-ring reachability matrix.

    rings: boolean csr matrix from k_ring_matrix. Only valid vertices get
    energies; neighborhoods are restricted to valid neighbors. Returns
    (energies, support counts).
    """
    n = len(source_positions)
    coo = rings.tocoo()
    keep = valid[coo.row] & valid[coo.col]
    i = coo.row[keep]
    j = coo.col[keep]

    energies = np.zeros(n)
    support = np.zeros(n, dtype=np.int64)
    if len(i) == 0:
        return energies, support

    p = source_positions[j] - source_positions[i]
    q = target_positions[j] - target_positions[i]

    np.add.at(support, i, 1)

    h = np.zeros((n, 3, 3))
    np.add.at(h, i, p[:, :, None] * q[:, None, :])

    active = np.where(valid & (support >= MIN_SUPPORT))[0]
    if len(active) == 0:
        return energies, support

    u, _, vt = np.linalg.svd(h[active])
    r = np.einsum("nba,ncb->nac", vt, u)  # V U^T batched
    det = np.linalg.det(r)
    flip = det < 0
    if flip.any():
        vt_f = vt[flip].copy()
        vt_f[:, -1, :] *= -1
        r[flip] = np.einsum("nba,ncb->nac", vt_f, u[flip])

    rot_of = np.zeros((n, 3, 3))
    rot_of[active] = r
    is_active = np.zeros(n, dtype=bool)
    is_active[active] = True

    pair_keep = is_active[i]
    resid = q[pair_keep] - np.einsum("pab,pb->pa", rot_of[i[pair_keep]],
                                     p[pair_keep])
    np.add.at(energies, i[pair_keep], (resid ** 2).sum(axis=1))
    return energies, support


def arap_energy(mesh: TriMesh, source_positions, target_positions, valid,
                k: int):
    """K-ring ARAP energies on a mesh (builds the ring matrix)."""
    rings = k_ring_matrix(mesh, k)
    return arap_energies(np.asarray(source_positions),
                         np.asarray(target_positions),
                         np.asarray(valid, dtype=bool), rings)
