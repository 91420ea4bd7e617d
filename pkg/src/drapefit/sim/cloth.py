"""Constraint assembly for the position-based cloth solver.

Distance constraints cover every unique edge, detectable quads contribute
a cross-diagonal shear constraint, and every interior edge carries a
dihedral bending constraint. Rest lengths and angles come from whatever
rest shape the garment arrives with; non-manifold soups are fine (an
"interior" edge is any edge shared by exactly two triangles).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geom import TriMesh
from .material import MaterialParams


@dataclass
class ClothConstraints:
    # unified distance constraints (edges + shear diagonals)
    pairs: np.ndarray           # (C, 2) vertex indices
    rest_lengths: np.ndarray    # (C,)
    compliances: np.ndarray     # (C,)
    pair_colors: list[np.ndarray]
    n_edge_constraints: int
    n_shear_constraints: int
    # dihedral bending
    bend_quads: np.ndarray      # (B, 4): shared edge (a, b), wings (c, d)
    bend_rest_angles: np.ndarray
    bend_compliances: np.ndarray
    bend_colors: list[np.ndarray]
    inv_mass: np.ndarray        # (N,)


def _greedy_colors(pairs_of_vertices) -> list[np.ndarray]:
    """Deterministic greedy coloring: constraints in a batch share no vertex."""
    color_last_use: list[dict] = []
    assignment = np.zeros(len(pairs_of_vertices), dtype=np.int64)
    for ci, verts in enumerate(pairs_of_vertices):
        color = 0
        while True:
            if color == len(color_last_use):
                color_last_use.append({})
            used = color_last_use[color]
            if all(v not in used for v in verts):
                for v in verts:
                    used[v] = ci
                assignment[ci] = color
                break
            color += 1
    return [np.where(assignment == c)[0] for c in range(len(color_last_use))]


def build_cloth(garment: TriMesh, material: MaterialParams) -> ClothConstraints:
    if garment.n_triangles < 1:
        raise ValueError("garment needs at least one triangle")
    areas = garment.face_areas
    if areas.sum() <= 0:
        raise ValueError("zero-area garment cannot be simulated")
    verts = garment.vertices
    tris = garment.triangles

    # per-edge adjacency and area weights
    edge_map: dict[tuple, list[int]] = {}
    for t in range(len(tris)):
        for k in range(3):
            a, b = tris[t, k], tris[t, (k + 1) % 3]
            key = (min(a, b), max(a, b))
            edge_map.setdefault(key, []).append(t)

    edges = np.array(sorted(edge_map), dtype=np.int64).reshape(-1, 2)
    edge_area = np.array([areas[edge_map[tuple(e)]].sum() / 3.0
                          for e in edges])
    edge_rest = np.linalg.norm(verts[edges[:, 0]] - verts[edges[:, 1]], axis=1)
    edge_comp = 1.0 / np.maximum(material.lame_mu * edge_area, 1e-12)

    # shear diagonals: adjacent triangle pairs forming a near-planar,
    # near-parallelogram quad (as fan-split quads do)
    shear_pairs, shear_rest, shear_comp = [], [], []
    for key, owners in edge_map.items():
        if len(owners) != 2:
            continue
        t0, t1 = owners
        w0 = [v for v in tris[t0] if v not in key]
        w1 = [v for v in tris[t1] if v not in key]
        if len(w0) != 1 or len(w1) != 1:
            continue
        c, d = w0[0], w1[0]
        n0 = np.cross(verts[tris[t0, 1]] - verts[tris[t0, 0]],
                      verts[tris[t0, 2]] - verts[tris[t0, 0]])
        n1 = np.cross(verts[tris[t1, 1]] - verts[tris[t1, 0]],
                      verts[tris[t1, 2]] - verts[tris[t1, 0]])
        denom = np.linalg.norm(n0) * np.linalg.norm(n1)
        if denom <= 0:
            continue
        cos = abs(float(np.dot(n0, n1)) / denom)
        if cos < 0.99:  # not planar enough to be a quad
            continue
        # parallelogram check: diagonals of similar length
        diag1 = np.linalg.norm(verts[key[0]] - verts[key[1]])
        diag2 = np.linalg.norm(verts[c] - verts[d])
        if not 0.7 <= diag2 / max(diag1, 1e-12) <= 1.4:
            continue
        quad_area = areas[t0] + areas[t1]
        shear_pairs.append((min(c, d), max(c, d)))
        shear_rest.append(diag2)
        shear_comp.append(1.0 / max(material.lame_lambda * quad_area, 1e-12))

    if shear_pairs:
        pairs = np.vstack([edges, np.asarray(shear_pairs, dtype=np.int64)])
        rest = np.concatenate([edge_rest, shear_rest])
        comp = np.concatenate([edge_comp, shear_comp])
    else:
        pairs, rest, comp = edges, edge_rest, edge_comp

    # bending on interior edges
    bend_quads, bend_rest, bend_comp = [], [], []
    for key, owners in edge_map.items():
        if len(owners) != 2:
            continue
        t0, t1 = owners
        w0 = [v for v in tris[t0] if v not in key]
        w1 = [v for v in tris[t1] if v not in key]
        if len(w0) != 1 or len(w1) != 1:
            continue
        quad = (key[0], key[1], w0[0], w1[0])
        angle = _dihedral_angle(verts[quad[0]], verts[quad[1]],
                                verts[quad[2]], verts[quad[3]])
        if angle is None:
            continue
        area_w = (areas[t0] + areas[t1]) / 3.0
        bend_quads.append(quad)
        bend_rest.append(angle)
        bend_comp.append(1.0 / max(material.bending * area_w, 1e-12))

    bend_quads = np.asarray(bend_quads, dtype=np.int64).reshape(-1, 4)
    bend_rest = np.asarray(bend_rest)
    bend_comp = np.asarray(bend_comp)

    # vertex masses from density and incident area
    vert_area = np.zeros(garment.n_vertices)
    np.add.at(vert_area, tris.reshape(-1), np.repeat(areas / 3.0, 3))
    mass = material.density * np.maximum(vert_area, 1e-12)
    inv_mass = 1.0 / mass

    return ClothConstraints(
        pairs=pairs, rest_lengths=rest, compliances=comp,
        pair_colors=_greedy_colors(pairs.tolist()),
        n_edge_constraints=len(edges), n_shear_constraints=len(shear_pairs),
        bend_quads=bend_quads, bend_rest_angles=bend_rest,
        bend_compliances=bend_comp,
        bend_colors=_greedy_colors(bend_quads.tolist()),
        inv_mass=inv_mass,
    )


def _dihedral_angle(pa, pb, pc, pd):
    """Angle between the triangles (a,b,c) and (a,b,d) across edge ab.

    Returns None for degenerate wings. Flat configurations give pi.
    """
    p2 = pb - pa
    p3 = pc - pa
    p4 = pd - pa
    n1 = np.cross(p2, p3)
    n2 = np.cross(p2, p4)
    l1 = np.linalg.norm(n1)
    l2 = np.linalg.norm(n2)
    if l1 < 1e-14 or l2 < 1e-14:
        return None
    d = float(np.dot(n1, n2) / (l1 * l2))
    return float(np.arccos(np.clip(d, -1.0, 1.0)))
