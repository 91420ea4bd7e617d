"""`.fmap` binary feature-map files, the bridge contract for external
foundation-model features: magic FMAP, version, dims, float32 data, u8 mask."""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..render import FeatureMap, ViewSpec

MAGIC = b"FMAP"
VERSION = 1


def save_fmap(path, features: np.ndarray, mask: np.ndarray) -> None:
    features = np.ascontiguousarray(features, dtype="<f4")
    if features.ndim != 3:
        raise ValueError("features must be H x W x C")
    h, w, c = features.shape
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    if mask.shape != (h, w):
        raise ValueError("mask must be H x W")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IIII", VERSION, h, w, c))
        fh.write(features.tobytes())
        fh.write(mask.tobytes())


def load_fmap(path) -> tuple[np.ndarray, np.ndarray]:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ValueError(f"{path.name}: not an fmap file")
        version, h, w, c = struct.unpack("<IIII", fh.read(16))
        if version != VERSION:
            raise ValueError(f"{path.name}: unsupported fmap version {version}")
        n = h * w * c * 4
        raw = fh.read(n)
        if len(raw) != n:
            raise ValueError(f"{path.name}: truncated feature data")
        features = np.frombuffer(raw, dtype="<f4").reshape(h, w, c)
        mask_raw = fh.read(h * w)
        if len(mask_raw) != h * w:
            raise ValueError(f"{path.name}: truncated mask")
        mask = np.frombuffer(mask_raw, dtype=np.uint8).reshape(h, w)
    return features.astype(np.float64), mask.astype(bool)


def load_fmap_as_feature_map(path, view: ViewSpec) -> FeatureMap:
    features, mask = load_fmap(path)
    return FeatureMap(features=features, mask=mask, view=view)
