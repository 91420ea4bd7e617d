"""Timestep-weighted fusion of denoising feature maps and the per-vertex
feature aggregation used before matching."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import zoom

from ..render import VertexFeatures

TIMESTEP_FLOOR = 0.4  # features participate for t >= 0.4 T
DEFAULT_W_MIN = 0.1
DEFAULT_ALPHA = 0.5


@dataclass
class FeatureStack:
    """Per-view denoising features: one map per (timestep, layer).

    ``layers[n][k]`` is the H_n x W_n x C_n map of layer n at timesteps[k].
    Timesteps must lie in [0.4 T, T].
    """

    timesteps: np.ndarray           # (K,)
    total_steps: float              # T
    layers: dict[int, list[np.ndarray]]

    def __post_init__(self):
        self.timesteps = np.asarray(self.timesteps, dtype=np.float64)
        if len(self.timesteps) == 0:
            raise ValueError("empty timestep set")
        lo = TIMESTEP_FLOOR * self.total_steps
        if (self.timesteps < lo - 1e-9).any() or \
                (self.timesteps > self.total_steps + 1e-9).any():
            raise ValueError(
                f"timesteps must lie in [{lo}, {self.total_steps}]")
        for n, maps in self.layers.items():
            if len(maps) != len(self.timesteps):
                raise ValueError(f"layer {n}: one map per timestep required")


def timestep_weight(t, total_steps: float,
                    w_min: float = DEFAULT_W_MIN) -> np.ndarray:
    """Linear ramp from w_min at 0.4 T up to 1.0 at T."""
    t = np.asarray(t, dtype=np.float64)
    lo = TIMESTEP_FLOOR * total_steps
    frac = (t - lo) / (total_steps - lo)
    return frac * (1.0 - w_min) + w_min


def fuse_timesteps(stack: FeatureStack,
                   w_min: float = DEFAULT_W_MIN) -> np.ndarray:
    """Weighted sum over timesteps per layer, then upsample + concat layers.

    Layers are bilinearly upsampled to the largest layer resolution and
    concatenated channel-wise into one H x W x (sum C_n) map.
    """
    if not 0.0 < w_min <= 1.0:
        raise ValueError("w_min must lie in (0, 1]")
    weights = timestep_weight(stack.timesteps, stack.total_steps, w_min)

    fused_layers = {}
    for n, maps in sorted(stack.layers.items()):
        acc = np.zeros_like(maps[0], dtype=np.float64)
        for w, fmap in zip(weights, maps):
            acc = acc + w * np.asarray(fmap, dtype=np.float64)
        fused_layers[n] = acc

    target_h = max(m.shape[0] for m in fused_layers.values())
    target_w = max(m.shape[1] for m in fused_layers.values())
    parts = []
    for n in sorted(fused_layers):
        m = fused_layers[n]
        if m.shape[:2] != (target_h, target_w):
            factors = (target_h / m.shape[0], target_w / m.shape[1], 1.0)
            m = zoom(m, factors, order=1, grid_mode=True, mode="nearest")
        parts.append(m)
    return np.concatenate(parts, axis=2)


def aggregate(diffusion: VertexFeatures, semantic: VertexFeatures,
              alpha: float = DEFAULT_ALPHA) -> VertexFeatures:
    """Blend two per-vertex feature sets into one matching representation.

    Each input is L2-normalized per vertex, the blocks are concatenated as
    [alpha * diffusion, (1 - alpha) * semantic], and rows are renormalized.
    Vertices unobserved in both inputs stay unobserved.
    """
    if len(diffusion.features) != len(semantic.features):
        raise ValueError("vertex counts differ between feature sets")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    a = diffusion.l2_normalized()
    b = semantic.l2_normalized()
    stacked = np.concatenate([alpha * a.features, (1.0 - alpha) * b.features],
                             axis=1)
    observations = a.observations + b.observations
    out = VertexFeatures(stacked, observations)
    out = out.l2_normalized()
    out.features[~out.observed] = 0.0
    return out
