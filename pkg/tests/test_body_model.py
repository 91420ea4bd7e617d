import numpy as np
import pytest
import torch
from scipy.spatial.transform import Rotation

from drapefit.body import BodyParams, interpolate, lbs_forward, lbs_forward_torch


def t64(a):
    return torch.as_tensor(np.asarray(a, dtype=np.float64))


def random_params(model, rng, d_scale=0.01):
    p = BodyParams.zeros(model)
    p.theta = rng.normal(scale=0.3, size=p.theta.shape)
    p.beta = rng.normal(scale=0.5, size=p.beta.shape)
    p.d = rng.normal(scale=d_scale, size=p.d.shape)
    p.s = 1.0 + rng.normal(scale=0.08, size=3)
    p.trans = rng.normal(scale=0.05, size=3)
    return p


def test_zero_pose_returns_template(synth_model):
    posed = lbs_forward(synth_model, BodyParams.zeros(synth_model))
    assert np.abs(posed.vertices - synth_model.template).max() < 1e-12


def test_axis_scale_doubles_x(synth_model):
    p = BodyParams.zeros(synth_model)
    p.s = np.array([2.0, 1.0, 1.0])
    posed = lbs_forward(synth_model, p)
    assert np.abs(posed.vertices[:, 0] - 2 * synth_model.template[:, 0]).max() < 1e-12
    assert np.abs(posed.vertices[:, 1:] - synth_model.template[:, 1:]).max() < 1e-12


def test_elbow_rotation_is_rigid_for_distal_vertices(synth_model):
    model = synth_model
    p = BodyParams.zeros(model)
    p.theta[5] = [0.0, 0.0, np.pi / 2]  # l_elbow, 90 degrees about z
    posed = lbs_forward(model, p)
    elbow = model.joint_regressor[5] @ model.template
    distal = (model.vertex_part == 2) & (np.abs(model.template[:, 0]) > 0.45)
    assert distal.sum() > 10
    rot = Rotation.from_rotvec([0, 0, np.pi / 2]).as_matrix()
    expect = (model.template[distal] - elbow) @ rot.T + elbow
    assert np.abs(posed.vertices[distal] - expect).max() < 1e-9


def test_root_rotation_global_equivariance(synth_model):
    model = synth_model
    aa = np.array([0.3, 0.7, -0.2])
    p = BodyParams.zeros(model)
    p.theta[0] = aa
    posed = lbs_forward(model, p)
    rot = Rotation.from_rotvec(aa).as_matrix()
    pivot = model.joint_regressor[0] @ model.template
    expect = (model.template - pivot) @ rot.T + pivot
    assert np.abs(posed.vertices - expect).max() < 1e-9


def test_dimension_mismatch_raises(synth_model):
    p = BodyParams.zeros(synth_model)
    p.beta = np.zeros(synth_model.n_shape + 1)
    with pytest.raises(ValueError):
        lbs_forward(synth_model, p)


def test_forward_jacobians_match_finite_differences(synth_model, rng):
    model = synth_model
    for _ in range(3):
        p = random_params(model, rng)
        groups = {"theta": p.theta, "beta": p.beta, "d": p.d, "s": p.s,
                  "trans": p.trans}
        for name in groups:
            base = {k: t64(v) for k, v in groups.items()}
            base[name].requires_grad_(True)
            out = lbs_forward_torch(model, base["theta"], base["beta"],
                                    base["d"], base["s"], base["trans"])
            cot = t64(rng.normal(size=out.shape))
            (out * cot).sum().backward()
            grad = base[name].grad.numpy()

            u = rng.normal(size=groups[name].shape)
            u /= np.linalg.norm(u)
            h = 1e-5

            def value(delta):
                shifted = dict(groups)
                shifted[name] = groups[name] + delta * u
                with torch.no_grad():
                    out = lbs_forward_torch(model, *(t64(shifted[k]) for k in
                                                     ("theta", "beta", "d", "s", "trans")))
                return float((out * cot).sum())

            fd = (value(h) - value(-h)) / (2 * h)
            an = float((grad * u).sum())
            assert abs(fd - an) <= 1e-4 * max(abs(fd), abs(an), 1e-8), \
                f"group {name}: fd {fd} vs analytic {an}"


def test_interpolate_endpoints_bit_exact(synth_model, rng):
    a = random_params(synth_model, rng)
    b = random_params(synth_model, rng)
    p0 = interpolate(a, b, 0.0)
    p1 = interpolate(a, b, 1.0)
    assert np.array_equal(p0.theta, a.theta) and np.array_equal(p0.d, a.d)
    assert np.array_equal(p1.beta, b.beta) and np.array_equal(p1.s, b.s)


def test_interpolate_same_params_fixed_point(synth_model, rng):
    a = random_params(synth_model, rng)
    for t in (0.25, 0.5, 0.9):
        mid = interpolate(a, a, t)
        assert np.abs(mid.theta - a.theta).max() < 1e-12
        assert np.abs(mid.beta - a.beta).max() < 1e-12


def test_slerp_midpoint_is_half_angle(synth_model):
    a = BodyParams.zeros(synth_model)
    b = BodyParams.zeros(synth_model)
    b.theta[2] = [0.0, 0.0, np.pi / 2]
    mid = interpolate(a, b, 0.5)
    assert np.allclose(mid.theta[2], [0.0, 0.0, np.pi / 4], atol=1e-12)


def test_no_pops_along_interpolation_path(synth_model, rng):
    a = random_params(synth_model, rng)
    b = random_params(synth_model, rng)
    frames = [lbs_forward(synth_model, interpolate(a, b, k / 30)).vertices
              for k in range(31)]
    steps = [np.linalg.norm(frames[k + 1] - frames[k], axis=1).max()
             for k in range(30)]
    total = np.linalg.norm(frames[-1] - frames[0], axis=1).max()
    uniform_bound = total / 30 + 1e-12
    assert max(steps) <= 10 * uniform_bound
