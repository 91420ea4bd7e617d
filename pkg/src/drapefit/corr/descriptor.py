"""Dependency-free per-vertex shape descriptors.

Channels: normalized height, centroid-relative direction, vertex normal,
and two multi-view depth statistics (screen-space depth-gradient magnitude
and a shading-style normal response) unprojected from a small rig. These
are deliberately simple — a weak stand-in for foundation-model features;
better features arrive through `.fmap` files instead.
"""
from __future__ import annotations

import numpy as np

from ..geom import TriMesh
from ..render import FeatureMap, VertexFeatures, make_rig, rasterize_depth, unproject

# channel scales: geometry cues dominate, view statistics refine
HEIGHT_WEIGHT = 2.0
DIRECTION_WEIGHT = 1.2
NORMAL_WEIGHT = 0.6
VIEWSTAT_WEIGHT = 0.3

DESCRIPTOR_ELEVATIONS = (30.0, 15.0)
DESCRIPTOR_AZIMUTHS = 6
DESCRIPTOR_RESOLUTION = 128


def _depth_gradient(depth: np.ndarray) -> np.ndarray:
    finite = np.isfinite(depth)
    d = np.where(finite, depth, 0.0)
    gy, gx = np.gradient(d)
    mag = np.sqrt(gx * gx + gy * gy)
    mag[~finite] = 0.0
    return np.clip(mag, 0.0, 0.05) / 0.05


def descriptor_features(mesh: TriMesh,
                        elevations=DESCRIPTOR_ELEVATIONS,
                        azimuths: int = DESCRIPTOR_AZIMUTHS,
                        resolution: int = DESCRIPTOR_RESOLUTION) -> VertexFeatures:
    verts = mesh.vertices
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    height = (verts[:, 1] - lo[1]) / max(hi[1] - lo[1], 1e-12)

    centroid = verts.mean(axis=0)
    rel = verts - centroid
    scale = np.abs(rel).max() + 1e-12
    direction = rel / scale

    normals = mesh.vertex_normals

    rig = make_rig(elevations=elevations, azimuths_per_ring=azimuths,
                   resolution=resolution)
    depth_maps = [rasterize_depth(mesh, v) for v in rig]
    feature_maps = []
    for dm in depth_maps:
        grad = _depth_gradient(dm.depth)
        rng_depth = np.where(dm.coverage, dm.depth, np.nan)
        span = np.nanmax(rng_depth) - np.nanmin(rng_depth) \
            if dm.coverage.any() else 1.0
        rel_depth = np.where(dm.coverage,
                             (dm.depth - np.nanmin(rng_depth)) / max(span, 1e-9),
                             0.0)
        feats = np.stack([grad, rel_depth], axis=2)
        feature_maps.append(FeatureMap(feats, dm.coverage, dm.view))
    view_stats = unproject(mesh, feature_maps, depth_maps)

    features = np.concatenate([
        HEIGHT_WEIGHT * height[:, None],
        DIRECTION_WEIGHT * direction,
        NORMAL_WEIGHT * normals,
        VIEWSTAT_WEIGHT * view_stats.features,
    ], axis=1)
    observations = np.maximum(view_stats.observations, 1)  # geometry always observed
    return VertexFeatures(features, observations)
