"""Registration result files: JSON parameters + float32 sidecar for d."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..body.model import BodyModel, BodyParams


def save_registration(params: BodyParams, path) -> None:
    """theta/beta/s/trans in JSON; d as raw float32 LE in a .d.f32 sidecar."""
    path = Path(path)
    doc = {
        "theta": params.theta.tolist(),
        "beta": params.beta.tolist(),
        "s": params.s.tolist(),
        "trans": params.trans.tolist(),
        "n_vertices": len(params.d),
        "d_sidecar": path.stem + ".d.f32",
    }
    path.write_text(json.dumps(doc, indent=1))
    sidecar = path.with_name(doc["d_sidecar"])
    sidecar.write_bytes(np.ascontiguousarray(params.d, dtype="<f4").tobytes())


def load_registration(path, model: BodyModel | None = None) -> BodyParams:
    path = Path(path)
    doc = json.loads(path.read_text())
    sidecar = path.with_name(doc["d_sidecar"])
    raw = np.frombuffer(sidecar.read_bytes(), dtype="<f4")
    n = doc["n_vertices"]
    if raw.size != 3 * n:
        raise ValueError(f"{sidecar.name}: expected {3 * n} floats, "
                         f"got {raw.size}")
    params = BodyParams(
        theta=np.asarray(doc["theta"], dtype=np.float64),
        beta=np.asarray(doc["beta"], dtype=np.float64),
        d=raw.reshape(n, 3).astype(np.float64),
        s=np.asarray(doc["s"], dtype=np.float64),
        trans=np.asarray(doc["trans"], dtype=np.float64),
    )
    if model is not None and n != model.n_vertices:
        raise ValueError("registration does not match the model's vertex count")
    return params
