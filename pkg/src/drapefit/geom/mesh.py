"""Indexed triangle surface with cached derived quantities.

Meshes may be non-manifold and may have several connected components;
adjacency is built from the raw triangle soup and no repair is attempted.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ..validation import as_points, as_triangles


@dataclass(frozen=True)
class UnitFrame:
    """Uniform scale + translation mapping input coordinates to the unit frame.

    to_unit(p) = (p - offset) * scale.  The unit frame has the longest
    bounding-box axis equal to 1 and the bbox centered at the origin.
    """

    scale: float
    offset: np.ndarray  # (3,)

    def to_unit(self, points: np.ndarray) -> np.ndarray:
        return (points - self.offset) * self.scale

    def from_unit(self, points: np.ndarray) -> np.ndarray:
        return points / self.scale + self.offset

    @staticmethod
    def fit(points: np.ndarray) -> "UnitFrame":
        lo = points.min(axis=0)
        hi = points.max(axis=0)
        extent = float((hi - lo).max())
        if extent <= 0.0:
            raise ValueError("cannot normalize a degenerate (zero extent) mesh")
        return UnitFrame(scale=1.0 / extent, offset=(lo + hi) / 2.0)


class TriMesh:
    """Immutable triangle mesh. Build acceleration structures lazily, share freely."""

    def __init__(self, vertices, triangles, uvs=None, frame: UnitFrame | None = None):
        # own a frozen copy: callers keep their arrays writable
        self.vertices = as_points(vertices, "vertices").copy()
        self.vertices.setflags(write=False)
        self.triangles = as_triangles(triangles, len(self.vertices), "triangles")
        self.triangles.setflags(write=False)
        if uvs is not None:
            uvs = np.asarray(uvs, dtype=np.float64)
            if uvs.shape != (len(self.vertices), 2):
                raise ValueError(f"uvs must have shape (N, 2), got {uvs.shape}")
            uvs.setflags(write=False)
        self.uvs = uvs
        self.frame = frame

    # -- basic facts ------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def with_vertices(self, vertices, frame="keep") -> "TriMesh":
        """Same topology and UVs over new vertex positions (caches dropped)."""
        return TriMesh(vertices, self.triangles, uvs=self.uvs,
                       frame=self.frame if frame == "keep" else frame)

    def normalized(self) -> "TriMesh":
        """Copy mapped into the unit frame, with the transform stored."""
        frame = UnitFrame.fit(self.vertices)
        return TriMesh(frame.to_unit(self.vertices), self.triangles,
                       uvs=self.uvs, frame=frame)

    def denormalized_vertices(self) -> np.ndarray:
        """Vertex positions in the original (pre-normalization) units."""
        if self.frame is None:
            return self.vertices
        return self.frame.from_unit(self.vertices)

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    # -- derived geometry --------------------------------------------------

    @cached_property
    def corners(self) -> np.ndarray:
        """(M, 3, 3) triangle corner positions."""
        return self.vertices[self.triangles]

    @cached_property
    def face_normals(self) -> np.ndarray:
        """(M, 3) unit face normals; zero-area faces get a zero normal."""
        c = self.corners
        n = np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])
        length = np.linalg.norm(n, axis=1, keepdims=True)
        return np.divide(n, length, out=np.zeros_like(n), where=length > 0)

    @cached_property
    def face_areas(self) -> np.ndarray:
        c = self.corners
        return 0.5 * np.linalg.norm(
            np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]), axis=1)

    @cached_property
    def vertex_normals(self) -> np.ndarray:
        """(N, 3) angle-weighted pseudonormals (robust for open surfaces)."""
        normals = np.zeros((self.n_vertices, 3))
        c = self.corners
        for k in range(3):
            a = c[:, (k + 1) % 3] - c[:, k]
            b = c[:, (k + 2) % 3] - c[:, k]
            na = np.linalg.norm(a, axis=1)
            nb = np.linalg.norm(b, axis=1)
            cosang = np.einsum("ij,ij->i", a, b) / np.maximum(na * nb, 1e-30)
            ang = np.arccos(np.clip(cosang, -1.0, 1.0))
            np.add.at(normals, self.triangles[:, k],
                      self.face_normals * ang[:, None])
        length = np.linalg.norm(normals, axis=1, keepdims=True)
        return np.divide(normals, length, out=np.zeros_like(normals),
                         where=length > 0)

    # -- connectivity -------------------------------------------------------

    @cached_property
    def edges(self) -> np.ndarray:
        """(E, 2) unique undirected edges, each sorted, lexicographic order."""
        e = np.vstack([self.triangles[:, [0, 1]],
                       self.triangles[:, [1, 2]],
                       self.triangles[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric boolean vertex adjacency from the edge multiset."""
        e = self.edges
        n = self.n_vertices
        data = np.ones(len(e), dtype=bool)
        a = sp.coo_matrix((data, (e[:, 0], e[:, 1])), shape=(n, n))
        a = a + a.T
        return a.tocsr()

    @cached_property
    def edge_graph(self) -> sp.csr_matrix:
        """Adjacency weighted by Euclidean edge length."""
        e = self.edges
        w = np.linalg.norm(self.vertices[e[:, 0]] - self.vertices[e[:, 1]],
                           axis=1)
        n = self.n_vertices
        g = sp.coo_matrix((w, (e[:, 0], e[:, 1])), shape=(n, n))
        return (g + g.T).tocsr()

    @cached_property
    def vertex_triangles(self) -> list[np.ndarray]:
        """For each vertex, the indices of its incident triangles."""
        owner = np.repeat(np.arange(self.n_triangles), 3)
        flat = self.triangles.reshape(-1)
        order = np.argsort(flat, kind="stable")
        flat = flat[order]
        owner = owner[order]
        bounds = np.searchsorted(flat, np.arange(self.n_vertices + 1))
        return [owner[bounds[i]:bounds[i + 1]]
                for i in range(self.n_vertices)]


def surface_point_position(mesh: TriMesh, tri_index, bary) -> np.ndarray:
    """3-D position of barycentric point(s) on the mesh."""
    tri_index = np.asarray(tri_index)
    bary = np.asarray(bary, dtype=np.float64)
    corners = mesh.vertices[mesh.triangles[tri_index]]
    return np.einsum("...k,...kj->...j", bary, corners)


def surface_point_normal(mesh: TriMesh, tri_index, bary) -> np.ndarray:
    """Barycentric interpolation of vertex pseudonormals, renormalized."""
    tri_index = np.asarray(tri_index)
    bary = np.asarray(bary, dtype=np.float64)
    vn = mesh.vertex_normals[mesh.triangles[tri_index]]
    n = np.einsum("...k,...kj->...j", bary, vn)
    length = np.linalg.norm(n, axis=-1, keepdims=True)
    return np.divide(n, length, out=np.zeros_like(n), where=length > 0)


@dataclass(frozen=True)
class SurfacePoint:
    """A point on a host mesh: triangle index + barycentric coordinates."""

    triangle: int
    bary: np.ndarray  # (3,), non-negative, sums to 1

    def __post_init__(self):
        b = np.asarray(self.bary, dtype=np.float64)
        if b.shape != (3,) or abs(b.sum() - 1.0) > 1e-9 or (b < -1e-12).any():
            raise ValueError(f"invalid barycentric coordinates {b}")
        object.__setattr__(self, "bary", b)

    def position(self, mesh: TriMesh) -> np.ndarray:
        return surface_point_position(mesh, self.triangle, self.bary)

    def normal(self, mesh: TriMesh) -> np.ndarray:
        return surface_point_normal(mesh, self.triangle, self.bary)


@dataclass(frozen=True)
class UvPoint:
    """A location on the proxy-body UV atlas, in [0, 1]^2."""

    u: float
    v: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=np.float64)
