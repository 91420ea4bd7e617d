"""Lift per-pixel features onto mesh vertices through known cameras."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geom import TriMesh
from .camera import ViewSpec
from .raster import DepthMap


@dataclass
class FeatureMap:
    """H x W x C per-pixel features with a validity mask, tied to a view."""

    features: np.ndarray
    mask: np.ndarray
    view: ViewSpec

    def __post_init__(self):
        if self.features.ndim != 3:
            raise ValueError("features must be H x W x C")
        if self.mask.shape != self.features.shape[:2]:
            raise ValueError("mask shape must match the feature raster")

    @property
    def channels(self) -> int:
        return self.features.shape[2]


@dataclass
class VertexFeatures:
    """Per-vertex embeddings with observation counts."""

    features: np.ndarray            # (N, C)
    observations: np.ndarray        # (N,) int
    normalized: bool = False

    @property
    def observed(self) -> np.ndarray:
        return self.observations > 0

    def l2_normalized(self) -> "VertexFeatures":
        norms = np.linalg.norm(self.features, axis=1, keepdims=True)
        feats = np.divide(self.features, norms,
                          out=np.zeros_like(self.features), where=norms > 1e-12)
        return VertexFeatures(feats, self.observations.copy(), normalized=True)


def default_occlusion_tolerance(view: ViewSpec) -> float:
    """1.5x the per-pixel depth step of a rasterized surface at rig distance.

    A float z-buffer has no fixed-point quantum, so the buffer's effective
    granularity is the depth change across one pixel footprint.
    """
    footprint = 2.0 * view.distance * np.tan(np.deg2rad(view.fov) / 2.0) \
        / view.resolution
    return 1.5 * footprint


def unproject(mesh: TriMesh, feature_maps: list[FeatureMap],
              depth_maps: list[DepthMap],
              occlusion_tolerance: float | None = None) -> VertexFeatures:
    """Mean of bilinear feature samples over the views that see each vertex.

    A vertex contributes in a view iff its camera depth is within tolerance
    of the stored z-buffer depth and the 2x2 bilinear footprint is fully
    covered and mask-valid. View order never matters: the mean is computed
    from per-view accumulation in a fixed order.
    """
    if len(feature_maps) != len(depth_maps):
        raise ValueError("need exactly one feature map per depth map")
    for fm, dm in zip(feature_maps, depth_maps):
        if fm.view != dm.view:
            raise ValueError("feature/depth view specs do not match")
    if not feature_maps:
        raise ValueError("no views given")

    channels = feature_maps[0].channels
    for fm in feature_maps:
        if fm.channels != channels:
            raise ValueError("feature maps disagree on channel count")

    n = mesh.n_vertices
    acc = np.zeros((n, channels))
    count = np.zeros(n, dtype=np.int64)

    for fm, dm in zip(feature_maps, depth_maps):
        view = fm.view
        tol = (default_occlusion_tolerance(view)
               if occlusion_tolerance is None else occlusion_tolerance)
        res = view.resolution
        pix, z = view.project(mesh.vertices)
        x = pix[:, 0] - 0.5  # sample grid indexed at pixel centers
        y = pix[:, 1] - 0.5
        x0 = np.floor(x).astype(np.int64)
        y0 = np.floor(y).astype(np.int64)
        inside = (x0 >= 0) & (y0 >= 0) & (x0 + 1 <= res - 1) & (y0 + 1 <= res - 1)

        x0c = np.clip(x0, 0, res - 2)
        y0c = np.clip(y0, 0, res - 2)
        fx = x - x0c
        fy = y - y0c

        d00 = dm.depth[y0c, x0c]
        d01 = dm.depth[y0c, x0c + 1]
        d10 = dm.depth[y0c + 1, x0c]
        d11 = dm.depth[y0c + 1, x0c + 1]
        covered = np.isfinite(d00) & np.isfinite(d01) & np.isfinite(d10) \
            & np.isfinite(d11)
        masked = fm.mask[y0c, x0c] & fm.mask[y0c, x0c + 1] \
            & fm.mask[y0c + 1, x0c] & fm.mask[y0c + 1, x0c + 1]
        nearest = np.minimum(np.minimum(d00, d01), np.minimum(d10, d11))
        visible = inside & covered & masked & (z <= nearest + tol)
        if not visible.any():
            continue

        w00 = (1 - fx) * (1 - fy)
        w01 = fx * (1 - fy)
        w10 = (1 - fx) * fy
        w11 = fx * fy
        feats = (fm.features[y0c, x0c] * w00[:, None]
                 + fm.features[y0c, x0c + 1] * w01[:, None]
                 + fm.features[y0c + 1, x0c] * w10[:, None]
                 + fm.features[y0c + 1, x0c + 1] * w11[:, None])
        acc[visible] += feats[visible]
        count[visible] += 1

    feats = np.divide(acc, count[:, None].astype(float),
                      out=np.zeros_like(acc), where=count[:, None] > 0)
    return VertexFeatures(feats, count)
