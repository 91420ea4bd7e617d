import numpy as np
import pytest

from drapefit.geom import TriMesh
from drapefit.sim import (
    ClothState,
    SimConfig,
    build_cloth,
    material_preset,
    step,
)
from drapefit.sim.material import MaterialParams


def test_single_triangle_constraint_counts():
    mesh = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    cons = build_cloth(mesh, material_preset("medium"))
    assert cons.n_edge_constraints == 3
    assert len(cons.bend_quads) == 0


def test_two_triangles_counts():
    mesh = TriMesh([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]],
                   [[0, 1, 2], [0, 2, 3]])
    cons = build_cloth(mesh, material_preset("medium"))
    assert cons.n_edge_constraints == 5
    assert len(cons.bend_quads) == 1
    assert cons.n_shear_constraints == 1  # planar quad: cross diagonal


def test_rest_state_zero_violation():
    mesh = TriMesh([[0, 0, 0], [1, 0, 0], [1, 1, 0.2], [0, 1, 0]],
                   [[0, 1, 2], [0, 2, 3]])
    cons = build_cloth(mesh, material_preset("medium"))
    x = mesh.vertices
    lengths = np.linalg.norm(x[cons.pairs[:, 0]] - x[cons.pairs[:, 1]], axis=1)
    assert np.abs(lengths - cons.rest_lengths).max() < 1e-12


def test_zero_area_garment_rejected():
    mesh = TriMesh([[0, 0, 0], [0, 0, 0.0000000001], [0, 0, 0.0000000002]],
                   [[0, 1, 2]])
    with pytest.raises(ValueError, match="zero-area"):
        build_cloth(mesh, material_preset("medium"))


def test_mu_must_be_positive():
    with pytest.raises(ValueError, match="lame_mu"):
        MaterialParams(lame_lambda=1.0, lame_mu=0.0, bending=1.0)


def test_coloring_batches_share_no_vertex():
    import oracles

    verts, tris = oracles.grid_mesh(6, 6)
    mesh = TriMesh(verts, tris)
    cons = build_cloth(mesh, material_preset("medium"))
    for batch in cons.pair_colors:
        seen = set()
        for ci in batch:
            a, b = cons.pairs[ci]
            assert a not in seen and b not in seen
            seen.update((a, b))


def test_no_gravity_rest_is_fixed_point():
    import oracles

    verts, tris = oracles.grid_mesh(6, 6, scale=0.1)
    mesh = TriMesh(verts, tris)
    cons = build_cloth(mesh, material_preset("medium"))
    state = ClothState.rest(mesh.vertices, cons, mesh.triangles)
    config = SimConfig(gravity=(0.0, 0.0, 0.0))
    for _ in range(5):
        step(state, None, config)
    assert np.abs(state.x - mesh.vertices).max() < 1e-10


def test_momentum_stays_zero_without_gravity():
    import oracles

    verts, tris = oracles.grid_mesh(6, 6, scale=0.1)
    rng = np.random.default_rng(0)
    bent = verts + rng.normal(scale=0.004, size=verts.shape)  # stressed state
    mesh = TriMesh(verts, tris)
    cons = build_cloth(mesh, material_preset("soft"))
    state = ClothState.rest(bent, cons, mesh.triangles)
    config = SimConfig(gravity=(0.0, 0.0, 0.0))
    mass = 1.0 / cons.inv_mass
    for _ in range(10):
        step(state, None, config)
        momentum = (mass[:, None] * state.v).sum(axis=0)
        assert np.linalg.norm(momentum) < 1e-10


def test_pinned_strip_sags_and_settles():
    # strip pinned along one edge (infinite mass), gravity on: it sags and
    # the kinetic energy decays toward zero under damping
    import oracles

    verts, tris = oracles.grid_mesh(10, 3, scale=0.05)
    mesh = TriMesh(verts, tris)
    cons = build_cloth(mesh, material_preset("medium"))
    pinned = np.where(mesh.vertices[:, 0] < 1e-9)[0]
    cons.inv_mass[pinned] = 0.0
    state = ClothState.rest(mesh.vertices, cons, mesh.triangles)
    config = SimConfig(gravity=(0.0, -5.8, 0.0))
    mass = np.where(cons.inv_mass > 0, 1.0 / np.maximum(cons.inv_mass, 1e-12), 0.0)

    min_y = []
    energies = []
    for _ in range(500):
        step(state, None, config)
        min_y.append(state.x[:, 1].min())
        energies.append(0.5 * float((mass * (state.v ** 2).sum(axis=1)).sum()))
    assert min_y[-1] < -0.2  # sagged well below the rest plane
    assert np.array_equal(state.x[pinned], mesh.vertices[pinned])
    assert energies[-1] < 1e-3 * max(energies[:50])  # kinetic energy decayed


def test_penetrating_vertex_pushed_to_margin():
    # single cloth vertex inside a big static plane body: one step must
    # leave it at non-negative height w.r.t. the contact
    body = TriMesh([[-1, 0, -1], [1, 0, -1], [1, 0, 1], [-1, 0, 1]],
                   [[0, 1, 2], [0, 2, 3]])
    cloth = TriMesh([[0.0, -0.001, 0.0], [0.05, -0.001, 0.0],
                     [0.0, -0.001, 0.05]], [[0, 1, 2]])
    cons = build_cloth(cloth, material_preset("medium"))
    state = ClothState.rest(cloth.vertices, cons, cloth.triangles)
    config = SimConfig(gravity=(0.0, 0.0, 0.0), collision_margin=0.003)
    step(state, body, config)
    assert (state.x[:, 1] >= 0.0).all()


def test_divergence_detection():
    mesh = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    cons = build_cloth(mesh, material_preset("medium"))
    state = ClothState.rest(mesh.vertices, cons, mesh.triangles)
    state.v[:] = np.nan
    with pytest.raises(FloatingPointError):
        step(state, None, SimConfig())
