import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from drapefit.geom import TriMesh

import oracles


@pytest.fixture(scope="session")
def grid():
    verts, tris = oracles.grid_mesh(8, 8)
    return TriMesh(verts, tris)


@pytest.fixture(scope="session")
def sphere():
    verts, tris = oracles.icosphere(2, radius=0.5)
    return TriMesh(verts, tris)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def cube_obj(tmp_path_factory):
    path = tmp_path_factory.mktemp("meshes") / "cube.obj"
    path.write_text(
        "v -1 -1 -1\nv 1 -1 -1\nv 1 1 -1\nv -1 1 -1\n"
        "v -1 -1 1\nv 1 -1 1\nv 1 1 1\nv -1 1 1\n"
        "f 1 2 3\nf 1 3 4\nf 5 7 6\nf 5 8 7\n"
        "f 1 5 6\nf 1 6 2\nf 2 6 7\nf 2 7 3\n"
        "f 3 7 8\nf 3 8 4\nf 4 8 5\nf 4 5 1\n")
    return path


@pytest.fixture(scope="session")
def synth_model():
    from drapefit.body import synth_body

    model, _ = synth_body()
    return model
