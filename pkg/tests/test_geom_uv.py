import numpy as np
import pytest

from drapefit.geom import TriMesh, UvAtlas, UvPoint, uv_to_surface, uv_to_surface_batch

import oracles


@pytest.fixture(scope="module")
def uv_grid():
    verts, tris = oracles.grid_mesh(6, 6)
    uvs = verts[:, :2] / 5.0 * 0.8 + 0.05  # charts strictly inside [0,1]^2
    return TriMesh(verts, tris, uvs=uvs)


def test_vertex_uv_maps_to_vertex(uv_grid):
    k = 14
    sp, off = uv_to_surface(uv_grid, UvPoint(*uv_grid.uvs[k]))
    assert not off
    assert np.linalg.norm(sp.position(uv_grid) - uv_grid.vertices[k]) < 1e-9


def test_barycenter_of_uv_triangle(uv_grid):
    t = 7
    center = uv_grid.uvs[uv_grid.triangles[t]].mean(axis=0)
    sp, off = uv_to_surface(uv_grid, UvPoint(*center))
    assert not off
    assert np.allclose(sp.bary, [1 / 3] * 3, atol=1e-9)
    assert sp.triangle in _triangles_containing(uv_grid, center)


def _triangles_containing(mesh, uv):
    # non-overlap atlas: at most one, but barycenter may sit on an edge
    hits = []
    for t, tri in enumerate(mesh.triangles):
        a, b, c = mesh.uvs[tri]
        m = np.array([[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]])
        try:
            v, w = np.linalg.solve(m, uv - a)
        except np.linalg.LinAlgError:
            continue
        if v >= -1e-9 and w >= -1e-9 and v + w <= 1 + 1e-9:
            hits.append(t)
    return hits


def test_off_chart_snaps_and_flags(uv_grid):
    sp, off = uv_to_surface(uv_grid, UvPoint(0.001, 0.001))
    assert off
    # exhaustive 2-D scan: nearest charted point is the (0.05, 0.05) corner
    target_uv = np.array([0.05, 0.05])
    snapped_uv = np.einsum("k,kj->j", sp.bary, uv_grid.uvs[uv_grid.triangles[sp.triangle]])
    assert np.linalg.norm(snapped_uv - target_uv) < 1e-9


def test_round_trip_identity_for_on_chart_vertices(uv_grid):
    tri, bary, off = uv_to_surface_batch(uv_grid, uv_grid.uvs)
    assert not off.any()
    pos = np.einsum("ik,ikj->ij", bary, uv_grid.vertices[uv_grid.triangles[tri]])
    assert np.abs(pos - uv_grid.vertices).max() < 1e-9


def test_overlap_validation_rejects_stacked_charts():
    verts = np.zeros((6, 3))
    verts[:3, 0] = [0, 1, 0]
    verts[:3, 1] = [0, 0, 1]
    verts[3:, 0] = [0, 1, 0]
    verts[3:, 1] = [0, 0, 1]
    verts[3:, 2] = 1.0
    uvs = np.array([[0.1, 0.1], [0.9, 0.1], [0.1, 0.9],
                    [0.1, 0.1], [0.9, 0.1], [0.1, 0.9]])
    mesh = TriMesh(verts, [[0, 1, 2], [3, 4, 5]], uvs=uvs)
    with pytest.raises(ValueError, match="overlap"):
        UvAtlas(mesh).validate_no_overlap()
