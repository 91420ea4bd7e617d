"""UV-atlas lookups: map 2-D atlas points onto the 3-D surface."""
from __future__ import annotations

import numpy as np

from .mesh import SurfacePoint, TriMesh, UvPoint


class UvAtlas:
    """Point-in-UV-triangle lookup over a mesh with per-vertex UVs.

    A uniform grid over [0,1]^2 bins the UV triangles. Lookups inside a
    chart return exact barycentric coordinates; off-chart points snap to
    the nearest charted point and are flagged.
    """

    def __init__(self, mesh: TriMesh, grid: int = 64):
        if mesh.uvs is None:
            raise ValueError("mesh has no UV coordinates")
        self.mesh = mesh
        self.uv_tris = mesh.uvs[mesh.triangles]  # (M, 3, 2)
        self.grid = grid
        self._bins: list[list[int]] = [[] for _ in range(grid * grid)]
        lo = np.floor(self.uv_tris.min(axis=1) * grid).astype(int)
        hi = np.floor(self.uv_tris.max(axis=1) * grid).astype(int)
        lo = np.clip(lo, 0, grid - 1)
        hi = np.clip(hi, 0, grid - 1)
        for t in range(len(self.uv_tris)):
            for gx in range(lo[t, 0], hi[t, 0] + 1):
                for gy in range(lo[t, 1], hi[t, 1] + 1):
                    self._bins[gx * grid + gy].append(t)

    def locate(self, uv_points) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Map UV points to (tri_index, bary, off_chart flag)."""
        uv_points = np.atleast_2d(np.asarray(uv_points, dtype=np.float64))
        n = len(uv_points)
        tri_idx = np.full(n, -1, dtype=np.int64)
        bary = np.zeros((n, 3))
        for qi, p in enumerate(uv_points):
            gx = min(max(int(p[0] * self.grid), 0), self.grid - 1)
            gy = min(max(int(p[1] * self.grid), 0), self.grid - 1)
            for t in self._bins[gx * self.grid + gy]:
                bw = _uv_barycentric(self.uv_tris[t], p)
                if bw is not None:
                    tri_idx[qi] = t
                    bary[qi] = bw
                    break
        off_chart = tri_idx < 0
        if off_chart.any():
            snap_tri, snap_bary = self._snap(uv_points[off_chart])
            tri_idx[off_chart] = snap_tri
            bary[off_chart] = snap_bary
        return tri_idx, bary, off_chart

    def _snap(self, uv_points):
        """Nearest charted point by exhaustive scan over UV triangles."""
        tri_idx = np.empty(len(uv_points), dtype=np.int64)
        bary = np.empty((len(uv_points), 3))
        for qi, p in enumerate(uv_points):
            best_d = np.inf
            for t in range(len(self.uv_tris)):
                bw, d = _closest_point_in_uv_triangle(self.uv_tris[t], p)
                if d < best_d:
                    best_d = d
                    tri_idx[qi] = t
                    bary[qi] = bw
        return tri_idx, bary

    def validate_no_overlap(self, samples_per_triangle: int = 3) -> None:
        """Reject atlases where two charted triangles overlap in UV space.

        Checks interior sample points of every triangle against all others
        (exact on shared edges because strict interior points are used).
        """
        interior = np.array([[0.6, 0.2, 0.2], [0.2, 0.6, 0.2], [0.2, 0.2, 0.6],
                             [1 / 3, 1 / 3, 1 / 3]])[:samples_per_triangle + 1]
        for t in range(len(self.uv_tris)):
            pts = interior @ self.uv_tris[t]
            for p in pts:
                gx = min(max(int(p[0] * self.grid), 0), self.grid - 1)
                gy = min(max(int(p[1] * self.grid), 0), self.grid - 1)
                for other in self._bins[gx * self.grid + gy]:
                    if other == t:
                        continue
                    if _uv_barycentric(self.uv_tris[other], p,
                                       tol=-1e-12) is not None:
                        raise ValueError(
                            f"UV atlas charts overlap: triangles {t} and {other}")


def _uv_barycentric(uv_tri: np.ndarray, p: np.ndarray, tol: float = 1e-12):
    """Barycentric coords of p in a UV triangle, or None if outside."""
    a, b, c = uv_tri
    m = np.array([[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-18:
        return None
    rhs = p - a
    v = (m[1, 1] * rhs[0] - m[0, 1] * rhs[1]) / det
    w = (-m[1, 0] * rhs[0] + m[0, 0] * rhs[1]) / det
    u = 1.0 - v - w
    if u >= -tol and v >= -tol and w >= -tol:
        bw = np.clip(np.array([u, v, w]), 0.0, None)
        return bw / bw.sum()
    return None


def _closest_point_in_uv_triangle(uv_tri: np.ndarray, p: np.ndarray):
    """(bary, distance) of the closest point to p within a 2-D triangle."""
    inside = _uv_barycentric(uv_tri, p)
    if inside is not None:
        return inside, 0.0
    best = (None, np.inf)
    for k in range(3):
        a = uv_tri[k]
        b = uv_tri[(k + 1) % 3]
        ab = b - a
        t = np.dot(p - a, ab) / max(np.dot(ab, ab), 1e-300)
        t = min(max(t, 0.0), 1.0)
        q = a + t * ab
        d = float(np.linalg.norm(p - q))
        if d < best[1]:
            bw = np.zeros(3)
            bw[k] = 1.0 - t
            bw[(k + 1) % 3] = t
            best = (bw, d)
    return best


def _atlas(mesh: TriMesh) -> UvAtlas:
    atlas = getattr(mesh, "_uv_atlas", None)
    if atlas is None:
        atlas = UvAtlas(mesh)
        mesh._uv_atlas = atlas
    return atlas


def uv_to_surface(mesh: TriMesh, point: UvPoint) -> tuple[SurfacePoint, bool]:
    """Surface point whose UV triangle contains the query.

    Off-chart queries snap to the nearest charted point; the bool flag
    reports the snap.
    """
    tri, bary, off = _atlas(mesh).locate([point.as_array()])
    return SurfacePoint(int(tri[0]), bary[0]), bool(off[0])


def uv_to_surface_batch(mesh: TriMesh, uv_points):
    """Vectorized uv_to_surface: (tri_index, bary, off_chart)."""
    return _atlas(mesh).locate(uv_points)
