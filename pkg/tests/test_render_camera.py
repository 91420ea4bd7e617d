import numpy as np
import pytest

from drapefit.render import ViewSpec, load_rig, make_rig, save_rig


def test_default_rig_has_36_views():
    rig = make_rig()
    assert len(rig) == 36
    assert {v.elevation for v in rig} == {30.0, 15.0}


def test_uniform_azimuth_spacing():
    rig = make_rig(elevations=(0.0,), azimuths_per_ring=4)
    assert [v.azimuth for v in rig] == [0.0, 90.0, 180.0, 270.0]


def test_default_ring_gap_is_20_degrees():
    rig = make_rig(elevations=(30.0, 15.0), azimuths_per_ring=18)
    ring = [v.azimuth for v in rig if v.elevation == 30.0]
    gaps = np.diff(ring)
    assert np.allclose(gaps, 20.0)


def test_camera_looks_at_origin():
    view = ViewSpec(elevation=25.0, azimuth=120.0)
    m = view.view_matrix()
    origin_cam = m[:3, :3] @ np.zeros(3) + m[:3, 3]
    # origin straight ahead on the -z axis at rig distance
    assert abs(origin_cam[0]) < 1e-12 and abs(origin_cam[1]) < 1e-12
    assert origin_cam[2] == pytest.approx(-view.distance)


def test_view_projection_invertible():
    view = ViewSpec(elevation=30.0, azimuth=40.0)
    assert abs(np.linalg.det(view.view_matrix())) > 1e-6
    assert abs(np.linalg.det(view.projection_matrix())) > 1e-9


def test_project_center_pixel():
    view = ViewSpec(elevation=0.0, azimuth=0.0, resolution=512)
    pix, depth = view.project(np.zeros((1, 3)))
    assert np.allclose(pix[0], [256.0, 256.0])
    assert depth[0] == pytest.approx(view.distance)


def test_rig_json_round_trip(tmp_path):
    rig = make_rig(elevations=(10.0,), azimuths_per_ring=3, resolution=64)
    path = tmp_path / "cams.json"
    save_rig(rig, path)
    again = load_rig(path)
    assert again == rig
