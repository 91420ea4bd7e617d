"""PFM (portable float map) export for depth maps: 32-bit little-endian."""
from __future__ import annotations

from pathlib import Path

import numpy as np


def save_pfm(array: np.ndarray, path) -> None:
    """Grayscale PFM, rows written bottom-to-top per the format."""
    if array.ndim != 2:
        raise ValueError("PFM export expects a 2-D array")
    data = np.flipud(array).astype("<f4")
    with open(path, "wb") as fh:
        fh.write(b"Pf\n")
        fh.write(f"{array.shape[1]} {array.shape[0]}\n".encode("ascii"))
        fh.write(b"-1.0\n")  # negative scale marks little-endian
        fh.write(data.tobytes())


def load_pfm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.readline().strip()
        if header != b"Pf":
            raise ValueError(f"{Path(path).name}: only grayscale PFM supported")
        w, h = map(int, fh.readline().split())
        scale = float(fh.readline())
        dtype = "<f4" if scale < 0 else ">f4"
        data = np.frombuffer(fh.read(w * h * 4), dtype=dtype).reshape(h, w)
    return np.flipud(data).astype(np.float64)
