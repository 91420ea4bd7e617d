"""Shared synthetic benchmark constructions used by tests and acceptance."""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from drapefit.corr import CorrespondenceSet


def mirror_map(mesh) -> np.ndarray:
    """Index of each vertex's x-mirrored partner on a symmetric mesh."""
    flipped = mesh.vertices.copy()
    flipped[:, 0] *= -1
    dist, idx = cKDTree(mesh.vertices).query(flipped)
    return idx


def plant_left_right_swaps(model, mesh, rng, frac_range=(0.10, 0.20)):
    """Plant scattered left<->right limb swaps into an identity field.

    Swaps are non-adjacent single vertices on the limbs with |x| large
    enough to be displaced by several edge lengths: coherent whole-limb
    mirror swaps are near-isometries and locally undetectable in principle,
    so the benchmark plants the scattered variety the filter is built for.

    Returns (corr, target_positions, swapped_mask).
    """
    verts = mesh.vertices
    n = len(verts)
    adj = mesh.adjacency
    mirror = mirror_map(mesh)
    pool = np.isin(model.vertex_part, [2, 3, 4, 5]) \
        & (np.abs(verts[:, 0]) >= 0.10)

    frac = rng.uniform(*frac_range)
    target = int(round(frac * n))
    swapped = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)
    count = 0
    for v in rng.permutation(np.where(pool)[0]):
        if count >= target:
            break
        if blocked[v]:
            continue
        swapped[v] = True
        count += 1
        blocked[v] = True
        blocked[adj.indices[adj.indptr[v]:adj.indptr[v + 1]]] = True

    idx = np.arange(n)
    idx[swapped] = mirror[swapped]
    corr = CorrespondenceSet.from_vertex_indices(idx, np.ones(n, dtype=bool))
    return corr, verts[idx], swapped
