from .mesh import SurfacePoint, TriMesh, UnitFrame, UvPoint
from .io import MeshFormatError, load_mesh, save_mesh
from .nearest import (
    NearestPointIndex,
    brute_force_nearest,
    nearest_surface_point,
    nearest_surface_points,
    signed_heights,
)
from .graph import (
    geodesic_distance,
    geodesic_distances,
    k_ring,
    k_ring_matrix,
)
from .laplacian import laplacian
from .uv import UvAtlas, uv_to_surface, uv_to_surface_batch

__all__ = [
    "SurfacePoint", "TriMesh", "UnitFrame", "UvPoint",
    "MeshFormatError", "load_mesh", "save_mesh",
    "NearestPointIndex", "brute_force_nearest", "nearest_surface_point",
    "nearest_surface_points", "signed_heights",
    "geodesic_distance", "geodesic_distances", "k_ring", "k_ring_matrix",
    "laplacian", "UvAtlas", "uv_to_surface", "uv_to_surface_batch",
]
