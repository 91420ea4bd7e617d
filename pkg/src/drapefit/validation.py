"""Input validation helpers shared across the package."""
from __future__ import annotations

import numpy as np


def as_points(x, name="points") -> np.ndarray:
    """Coerce to a float64 (N, 3) array, rejecting anything else."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1 and arr.shape == (3,):
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"{name} must have shape (N, 3), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_point(x, name="point") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {arr.shape}")
    return arr


def as_triangles(x, n_vertices: int, name="triangles") -> np.ndarray:
    """Coerce to an int64 (M, 3) index array and validate the index range."""
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"{name} must have shape (M, 3), got {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= n_vertices):
        bad = int(arr.max() if arr.max() >= n_vertices else arr.min())
        raise ValueError(f"{name} contains out-of-range vertex index {bad} "
                         f"(mesh has {n_vertices} vertices)")
    degenerate = ((arr[:, 0] == arr[:, 1]) | (arr[:, 1] == arr[:, 2])
                  | (arr[:, 0] == arr[:, 2]))
    if degenerate.any():
        raise ValueError(f"{name} contains {int(degenerate.sum())} degenerate "
                         "triangles (repeated vertex indices)")
    return arr


def as_features(x, name="features") -> np.ndarray:
    """Coerce to a float64 (N, C) feature matrix."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D (N, C), got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value
