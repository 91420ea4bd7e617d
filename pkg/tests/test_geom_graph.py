import math

import numpy as np
import pytest

from drapefit.geom import TriMesh, geodesic_distance, geodesic_distances, k_ring, k_ring_matrix

import oracles


def interior_vertex(nx=8, ny=8):
    return 3 * ny + 4  # (3, 4) in the grid


def test_one_ring_of_grid_interior(grid):
    seed = interior_vertex()
    ring = k_ring(grid, seed, 1)
    assert len(ring) == 6  # triangulated grid: 6 direct neighbors
    assert seed not in ring


def test_k_ring_matches_bfs_oracle(grid):
    seed = interior_vertex()
    for k in (1, 2, 3, 4):
        assert k_ring(grid, seed, k) == oracles.bfs_rings(grid.triangles, seed, k)


def test_k_ring_matrix_matches_bfs(grid):
    for k in (1, 2, 4):
        reach = k_ring_matrix(grid, k)
        for seed in (0, interior_vertex(), grid.n_vertices - 1):
            row = set(reach.indices[reach.indptr[seed]:reach.indptr[seed + 1]].tolist())
            assert row == oracles.bfs_rings(grid.triangles, seed, k)


def test_isolated_vertex_empty_ring():
    verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [9, 9, 9]], dtype=float)
    mesh = TriMesh(verts, [[0, 1, 2]])
    assert k_ring(mesh, 3, 3) == set()


def test_geodesic_trivial_cases(grid):
    assert geodesic_distance(grid, 5, 5) == 0.0
    # adjacent vertices: edge length
    assert geodesic_distance(grid, 0, 1) == pytest.approx(1.0)


def test_geodesic_matches_heap_dijkstra(grid):
    ref = oracles.heap_dijkstra(grid.vertices, grid.triangles, 0)
    corner = grid.n_vertices - 1
    assert geodesic_distance(grid, 0, corner) == pytest.approx(ref[corner], rel=1e-12)
    targets = [5, 17, 36, corner]
    batch = geodesic_distances(grid, [0] * len(targets), targets)
    for t, d in zip(targets, batch):
        assert d == pytest.approx(ref[t], rel=1e-12)


def test_geodesic_disconnected_returns_inf():
    verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0],
                      [5, 0, 0], [6, 0, 0], [5, 1, 0]], dtype=float)
    mesh = TriMesh(verts, [[0, 1, 2], [3, 4, 5]])
    assert math.isinf(geodesic_distance(mesh, 0, 3))


def test_geodesic_symmetry_and_triangle_inequality(sphere, rng):
    idx = rng.integers(0, sphere.n_vertices, size=(10, 3))
    for a, b, c in idx:
        ab = geodesic_distance(sphere, int(a), int(b))
        ba = geodesic_distance(sphere, int(b), int(a))
        assert ab == pytest.approx(ba, rel=1e-12)
        ac = geodesic_distance(sphere, int(a), int(c))
        cb = geodesic_distance(sphere, int(c), int(b))
        assert ab <= ac + cb + 1e-12
