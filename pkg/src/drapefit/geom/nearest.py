"""Exact nearest-point-on-mesh queries and pseudonormal signed heights.

The accelerated path prunes candidate triangles with two KD-trees (mesh
vertices bound the distance from above, triangle centroids are then range
searched), which keeps the query exact while skipping almost all triangles.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..validation import as_points
from .mesh import TriMesh, surface_point_position


def closest_point_on_triangles(corners: np.ndarray, queries: np.ndarray):
    """Closest point of each (triangle, query) pair, plus barycentric coords.

    corners: (K, 3, 3), queries: (K, 3). Vectorized region-walk from
    Ericson's Real-Time Collision Detection.
    Returns (points (K,3), bary (K,3)).
    """
    a, b, c = corners[:, 0], corners[:, 1], corners[:, 2]
    ab = b - a
    ac = c - a
    ap = queries - a

    d1 = np.einsum("ij,ij->i", ab, ap)
    d2 = np.einsum("ij,ij->i", ac, ap)
    bp = queries - b
    d3 = np.einsum("ij,ij->i", ab, bp)
    d4 = np.einsum("ij,ij->i", ac, bp)
    cp = queries - c
    d5 = np.einsum("ij,ij->i", ab, cp)
    d6 = np.einsum("ij,ij->i", ac, cp)

    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    n = len(corners)
    bary = np.zeros((n, 3))
    done = np.zeros(n, dtype=bool)

    def settle(mask, bw):
        fresh = mask & ~done
        if fresh.any():
            bary[fresh] = bw(fresh)
            done[fresh] = True

    settle((d1 <= 0) & (d2 <= 0), lambda m: [1.0, 0.0, 0.0])
    settle((d3 >= 0) & (d4 <= d3), lambda m: [0.0, 1.0, 0.0])

    def edge_ab(m):
        v = d1[m] / (d1[m] - d3[m])
        return np.stack([1.0 - v, v, np.zeros_like(v)], axis=1)

    settle((vc <= 0) & (d1 >= 0) & (d3 <= 0), edge_ab)
    settle((d6 >= 0) & (d5 <= d6), lambda m: [0.0, 0.0, 1.0])

    def edge_ac(m):
        w = d2[m] / (d2[m] - d6[m])
        return np.stack([1.0 - w, np.zeros_like(w), w], axis=1)

    settle((vb <= 0) & (d2 >= 0) & (d6 <= 0), edge_ac)

    def edge_bc(m):
        w = (d4[m] - d3[m]) / ((d4[m] - d3[m]) + (d5[m] - d6[m]))
        return np.stack([np.zeros_like(w), 1.0 - w, w], axis=1)

    settle((va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0), edge_bc)

    inside = ~done
    if inside.any():
        denom = va[inside] + vb[inside] + vc[inside]
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        v = vb[inside] / denom
        w = vc[inside] / denom
        bary[inside] = np.stack([1.0 - v - w, v, w], axis=1)

    points = np.einsum("ik,ikj->ij", bary, corners)
    return points, bary


class NearestPointIndex:
    """Prebuilt acceleration structure for exact nearest-surface queries."""

    def __init__(self, mesh: TriMesh):
        self.mesh = mesh
        self._vert_tree = cKDTree(mesh.vertices)
        centroids = mesh.corners.mean(axis=1)
        self._tri_tree = cKDTree(centroids)
        # Max distance from a triangle centroid to its farthest point.
        self._tri_radius = np.linalg.norm(
            mesh.corners - centroids[:, None, :], axis=2).max(axis=1)
        self._rmax = float(self._tri_radius.max()) if len(self._tri_radius) else 0.0

    def query(self, points) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Globally nearest surface point for each query.

        Returns (tri_index (Q,), bary (Q,3), distance (Q,)).
        """
        points = as_points(points, "query points")
        upper, _ = self._vert_tree.query(points)
        # Any triangle whose surface might beat the vertex bound has its
        # centroid within upper + its own radius; search with the global max.
        radius = upper + self._rmax + 1e-12
        groups = self._tri_tree.query_ball_point(points, radius)

        tri_idx = np.empty(len(points), dtype=np.int64)
        bary = np.empty((len(points), 3))
        dist = np.empty(len(points))

        cand_tri = []
        cand_query = []
        for qi, grp in enumerate(groups):
            cand_tri.append(np.asarray(grp, dtype=np.int64))
            cand_query.append(np.full(len(grp), qi, dtype=np.int64))
        cand_tri = np.concatenate(cand_tri) if cand_tri else np.empty(0, np.int64)
        cand_query = np.concatenate(cand_query) if cand_query else np.empty(0, np.int64)

        if len(cand_tri) == 0:
            raise ValueError("empty candidate set: mesh has no triangles")

        pts, bw = closest_point_on_triangles(
            self.mesh.corners[cand_tri], points[cand_query])
        d = np.linalg.norm(pts - points[cand_query], axis=1)

        order = np.lexsort((d, cand_query))
        cand_query_s = cand_query[order]
        first = np.searchsorted(cand_query_s, np.arange(len(points)))
        best = order[first]
        tri_idx[:] = cand_tri[best]
        bary[:] = bw[best]
        dist[:] = d[best]
        return tri_idx, bary, dist


def _nearest_index(mesh: TriMesh) -> NearestPointIndex:
    # Cache on the mesh instance; TriMesh is immutable after construction.
    idx = getattr(mesh, "_nearest_index", None)
    if idx is None:
        idx = NearestPointIndex(mesh)
        mesh._nearest_index = idx
    return idx


def nearest_surface_points(mesh: TriMesh, points):
    """Batch nearest-point query: (tri_index, bary, footpoints, distances)."""
    tri, bary, dist = _nearest_index(mesh).query(points)
    feet = surface_point_position(mesh, tri, bary)
    return tri, bary, feet, dist


def nearest_surface_point(mesh: TriMesh, point):
    """Nearest surface point for one query: (SurfacePoint, distance, normal).

    The normal is the angle-weighted pseudonormal interpolated at the foot
    point (covers the vertex / edge / face cases uniformly).
    """
    from .mesh import SurfacePoint, surface_point_normal

    tri, bary, _, dist = nearest_surface_points(mesh, np.asarray(point)[None, :])
    sp = SurfacePoint(int(tri[0]), np.clip(bary[0], 0.0, None) /
                      max(bary[0].clip(0.0, None).sum(), 1e-300))
    normal = surface_point_normal(mesh, tri[0], sp.bary)
    return sp, float(dist[0]), normal


def signed_heights(mesh: TriMesh, points):
    """Signed distance of each point to the mesh via the pseudonormal test.

    Positive means outside (above the nearest surface point's pseudonormal),
    negative inside. Returns (heights, tri_index, bary, footpoints).
    """
    points = as_points(points, "points")
    tri, bary, feet, dist = nearest_surface_points(mesh, points)
    from .mesh import surface_point_normal

    normals = surface_point_normal(mesh, tri, bary)
    side = np.einsum("ij,ij->i", points - feet, normals)
    sign = np.where(side >= 0.0, 1.0, -1.0)
    return sign * dist, tri, bary, feet


def brute_force_nearest(mesh: TriMesh, points):
    """Exhaustive nearest-point reference: loops over every triangle."""
    points = as_points(points, "points")
    tri_idx = np.empty(len(points), dtype=np.int64)
    bary = np.empty((len(points), 3))
    dist = np.full(len(points), np.inf)
    for t in range(mesh.n_triangles):
        corners = np.broadcast_to(mesh.corners[t], (len(points), 3, 3))
        pts, bw = closest_point_on_triangles(corners, points)
        d = np.linalg.norm(pts - points, axis=1)
        better = d < dist
        dist[better] = d[better]
        tri_idx[better] = t
        bary[better] = bw[better]
    return tri_idx, bary, dist
