"""Body-model archive: JSON manifest + raw float32 little-endian arrays.

Single file: magic ``DFBM``, u32 version, u64 manifest length, manifest
JSON, then the concatenated arrays at the offsets the manifest records.
Models are stored at float32 precision; synthetic models are generated
pre-rounded to float32 so save -> load round-trips bit-exactly.
"""
from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .model import BodyModel

MAGIC = b"DFBM"
VERSION = 1

_ARRAYS = [
    # name, attribute, dtype stored
    ("template", "<f4"), ("triangles", "<i4"), ("uvs", "<f4"),
    ("uv_charted", "<u1"), ("joint_regressor", "<f4"), ("weights", "<f4"),
    ("shape_basis", "<f4"),
]


class ArchiveError(ValueError):
    """Raised on malformed, truncated, or invariant-violating archives."""


def save_model(model: BodyModel, path) -> None:
    path = Path(path)
    blobs = []
    entries = []
    offset = 0
    for name, dtype in _ARRAYS:
        arr = np.ascontiguousarray(getattr(model, name), dtype=dtype)
        raw = arr.tobytes()
        entries.append({
            "name": name,
            "dtype": dtype,
            "shape": list(arr.shape),
            "offset": offset,
            "nbytes": len(raw),
            "sha256": hashlib.sha256(raw).hexdigest(),
        })
        blobs.append(raw)
        offset += len(raw)

    manifest = {
        "version": VERSION,
        "n_vertices": model.n_vertices,
        "n_joints": model.n_joints,
        "n_shape": model.n_shape,
        "parents": model.parents.tolist(),
        "joint_names": list(model.joint_names),
        "part_names": list(model.part_names),
        "vertex_part": (model.vertex_part.tolist()
                        if model.vertex_part is not None else None),
        "arrays": entries,
    }
    payload = json.dumps(manifest).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", VERSION, len(payload)))
        fh.write(payload)
        for raw in blobs:
            fh.write(raw)


def load_model(path) -> BodyModel:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ArchiveError(f"{path.name}: not a body-model archive")
        version, mlen = struct.unpack("<IQ", fh.read(12))
        if version != VERSION:
            raise ArchiveError(f"{path.name}: unsupported version {version}")
        manifest = json.loads(fh.read(mlen).decode("utf-8"))
        data = fh.read()

    arrays = {}
    for entry in manifest["arrays"]:
        raw = data[entry["offset"]:entry["offset"] + entry["nbytes"]]
        if len(raw) != entry["nbytes"]:
            raise ArchiveError(
                f"{path.name}: array {entry['name']} truncated "
                f"({len(raw)} of {entry['nbytes']} bytes)")
        if hashlib.sha256(raw).hexdigest() != entry["sha256"]:
            raise ArchiveError(f"{path.name}: checksum mismatch on {entry['name']}")
        arr = np.frombuffer(raw, dtype=entry["dtype"]).reshape(entry["shape"])
        expected = int(np.prod(entry["shape"])) * np.dtype(entry["dtype"]).itemsize
        if expected != entry["nbytes"]:
            raise ArchiveError(f"{path.name}: dimension mismatch on {entry['name']}")
        arrays[entry["name"]] = arr

    try:
        model = BodyModel(
            template=arrays["template"],
            triangles=arrays["triangles"],
            uvs=arrays["uvs"],
            uv_charted=arrays["uv_charted"].astype(bool),
            parents=np.asarray(manifest["parents"], dtype=np.int64),
            joint_regressor=arrays["joint_regressor"],
            weights=arrays["weights"],
            shape_basis=arrays["shape_basis"],
            joint_names=list(manifest.get("joint_names", [])),
            vertex_part=(np.asarray(manifest["vertex_part"], dtype=np.int64)
                         if manifest.get("vertex_part") is not None else None),
            part_names=list(manifest.get("part_names", [])),
        )
    except ValueError as exc:
        raise ArchiveError(f"{path.name}: {exc}") from exc
    return model
