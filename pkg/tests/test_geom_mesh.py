import numpy as np
import pytest

from drapefit.geom import MeshFormatError, TriMesh, load_mesh, save_mesh

import oracles


def test_cube_obj_loads_and_normalizes(cube_obj):
    mesh = load_mesh(cube_obj)
    assert mesh.n_vertices == 8
    assert mesh.n_triangles == 12
    lo, hi = mesh.bbox()
    assert np.allclose(hi - lo, 1.0, atol=1e-12)  # cube: all axes longest
    assert np.allclose((lo + hi) / 2, 0.0, atol=1e-12)


def test_quad_faces_fan_split(tmp_path):
    path = tmp_path / "quad.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n")
    mesh = load_mesh(path, normalize=False)
    assert mesh.n_triangles == 2


def test_out_of_range_index_rejected(tmp_path):
    path = tmp_path / "bad.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n")
    with pytest.raises(MeshFormatError):
        load_mesh(path)


def test_degenerate_triangles_dropped_at_load(tmp_path):
    path = tmp_path / "degen.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 1 1 2\n")
    mesh = load_mesh(path, normalize=False)
    assert mesh.n_triangles == 1


def test_degenerate_triangles_rejected_by_constructor():
    with pytest.raises(ValueError, match="degenerate"):
        TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 0, 1]])


def test_zero_triangles_is_an_error(tmp_path):
    path = tmp_path / "pts.obj"
    path.write_text("v 0 0 0\nv 1 0 0\n")
    with pytest.raises(MeshFormatError):
        load_mesh(path)


def test_normalization_round_trip(rng):
    verts = rng.normal(size=(50, 3)) * np.array([3.0, 1.0, 0.5]) + 7.0
    tris = np.array([[i, i + 1, i + 2] for i in range(48)])
    mesh = TriMesh(verts, tris).normalized()
    diag = np.linalg.norm(verts.max(0) - verts.min(0))
    back = mesh.denormalized_vertices()
    assert np.abs(back - verts).max() <= 1e-6 * diag


def test_save_load_round_trip_obj(tmp_path, sphere):
    path = tmp_path / "s.obj"
    save_mesh(sphere, path)
    again = load_mesh(path, normalize=False)
    assert again.n_vertices == sphere.n_vertices
    assert np.array_equal(again.triangles, sphere.triangles)
    assert np.abs(again.vertices - sphere.vertices).max() < 1e-6


def test_save_load_round_trip_ply(tmp_path, sphere):
    path = tmp_path / "s.ply"
    save_mesh(sphere, path)
    again = load_mesh(path, normalize=False)
    assert again.n_vertices == sphere.n_vertices
    assert np.array_equal(again.triangles, sphere.triangles)
    assert np.abs(again.vertices - sphere.vertices).max() < 1e-6


def test_obj_uv_round_trip(tmp_path, grid):
    uvs = grid.vertices[:, :2] / 7.0
    mesh = TriMesh(grid.vertices, grid.triangles, uvs=uvs)
    path = tmp_path / "g.obj"
    save_mesh(mesh, path)
    again = load_mesh(path, normalize=False)
    assert again.uvs is not None
    assert np.abs(again.uvs - uvs).max() < 1e-6


def test_vertex_normals_point_outward_on_sphere(sphere):
    radial = sphere.vertices / np.linalg.norm(sphere.vertices, axis=1,
                                              keepdims=True)
    dots = np.einsum("ij,ij->i", sphere.vertex_normals, radial)
    assert dots.min() > 0.9


def test_multiple_components_allowed():
    verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0],
                      [5, 0, 0], [6, 0, 0], [5, 1, 0]], dtype=float)
    tris = np.array([[0, 1, 2], [3, 4, 5]])
    mesh = TriMesh(verts, tris)
    from drapefit.geom.graph import connected_component_labels
    labels = connected_component_labels(mesh)
    assert len(set(labels.tolist())) == 2
