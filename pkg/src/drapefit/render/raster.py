"""Deterministic software z-buffer rasterizer (depth only, no culling).

Triangles are filled in index order with a top-left rule, so shared edges
are covered exactly once and the whole pass is reproducible bit for bit.
Back-face culling stays off: garments are open, double-sided surfaces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geom import TriMesh
from .camera import NEAR, ViewSpec

BACKGROUND = np.inf


@dataclass
class DepthMap:
    """H x W view-space depths (+inf background) with its camera."""

    depth: np.ndarray
    view: ViewSpec

    @property
    def coverage(self) -> np.ndarray:
        return np.isfinite(self.depth)


def rasterize_depth(mesh: TriMesh, view: ViewSpec) -> DepthMap:
    res = view.resolution
    depth = np.full((res, res), BACKGROUND)
    if mesh.n_triangles == 0:
        return DepthMap(depth, view)

    screen, z = view.project(mesh.vertices)
    inv_z = 1.0 / np.maximum(z, 1e-12)
    behind = z <= NEAR

    tris = mesh.triangles
    for t in range(len(tris)):
        i0, i1, i2 = tris[t]
        if behind[i0] or behind[i1] or behind[i2]:
            continue  # crude near-plane rejection; rigs keep meshes in frustum
        _fill_triangle(depth, screen[i0], screen[i1], screen[i2],
                       inv_z[i0], inv_z[i1], inv_z[i2])
    return DepthMap(depth, view)


def _fill_triangle(depth, p0, p1, p2, w0, w1, w2):
    res = depth.shape[0]
    area = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])
    if area == 0.0:
        return
    if area < 0.0:  # normalize winding so edge functions are >= 0 inside
        p1, p2 = p2, p1
        w1, w2 = w2, w1
        area = -area

    xmin = max(int(np.floor(min(p0[0], p1[0], p2[0]) - 0.5)), 0)
    xmax = min(int(np.ceil(max(p0[0], p1[0], p2[0]) + 0.5)), res - 1)
    ymin = max(int(np.floor(min(p0[1], p1[1], p2[1]) - 0.5)), 0)
    ymax = min(int(np.ceil(max(p0[1], p1[1], p2[1]) + 0.5)), res - 1)
    if xmin > xmax or ymin > ymax:
        return

    xs = np.arange(xmin, xmax + 1) + 0.5
    ys = np.arange(ymin, ymax + 1) + 0.5
    px, py = np.meshgrid(xs, ys)

    def edge(a, b):
        # cross(b - a, p - a): positive on the interior side
        return (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0])

    e0 = edge(p1, p2)  # opposite p0
    e1 = edge(p2, p0)
    e2 = edge(p0, p1)

    def tie(a, b):
        # top-left rule, y-down screen space: top = horizontal going right
        # (interior below), left = edge going up (interior on its right)
        dy = b[1] - a[1]
        dx = b[0] - a[0]
        return (dy == 0.0 and dx > 0.0) or dy < 0.0

    def covered(e, a, b):
        return (e > 0.0) | ((e == 0.0) & tie(a, b))

    inside = covered(e0, p1, p2) & covered(e1, p2, p0) & covered(e2, p0, p1)
    if not inside.any():
        return

    # perspective-correct depth: 1/z interpolates linearly in screen space
    b0 = e0 / area
    b1 = e1 / area
    b2 = e2 / area
    inv_z = b0 * w0 + b1 * w1 + b2 * w2
    z = 1.0 / np.maximum(inv_z, 1e-12)

    tile = depth[ymin:ymax + 1, xmin:xmax + 1]
    better = inside & (z < tile)
    tile[better] = z[better]


def shade_preview(mesh: TriMesh, view: ViewSpec,
                  light_dir=(0.4, 0.8, 0.45)) -> np.ndarray:
    """Flat-shaded uint8 grayscale frame for the preview endpoint."""
    res = view.resolution
    dm = rasterize_depth(mesh, view)
    # shade by the normal of whichever triangle owns each pixel: redo a
    # cheap pass reusing the depth buffer as the visibility oracle
    img = np.zeros((res, res), dtype=np.float64)
    light = np.asarray(light_dir, dtype=float)
    light /= np.linalg.norm(light)
    shades = np.abs(mesh.face_normals @ light) * 0.85 + 0.15

    screen, z = view.project(mesh.vertices)
    inv_z = 1.0 / np.maximum(z, 1e-12)
    for t in range(mesh.n_triangles):
        i0, i1, i2 = mesh.triangles[t]
        _shade_triangle(img, dm.depth, screen[i0], screen[i1], screen[i2],
                        inv_z[i0], inv_z[i1], inv_z[i2], shades[t])
    return (np.clip(img, 0.0, 1.0) * 255).astype(np.uint8)


def _shade_triangle(img, depth, p0, p1, p2, w0, w1, w2, shade):
    res = img.shape[0]
    area = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])
    if area == 0.0:
        return
    if area < 0.0:
        p1, p2 = p2, p1
        w1, w2 = w2, w1
        area = -area
    xmin = max(int(np.floor(min(p0[0], p1[0], p2[0]) - 0.5)), 0)
    xmax = min(int(np.ceil(max(p0[0], p1[0], p2[0]) + 0.5)), res - 1)
    ymin = max(int(np.floor(min(p0[1], p1[1], p2[1]) - 0.5)), 0)
    ymax = min(int(np.ceil(max(p0[1], p1[1], p2[1]) + 0.5)), res - 1)
    if xmin > xmax or ymin > ymax:
        return
    xs = np.arange(xmin, xmax + 1) + 0.5
    ys = np.arange(ymin, ymax + 1) + 0.5
    px, py = np.meshgrid(xs, ys)
    e0 = (p2[0] - p1[0]) * (py - p1[1]) - (p2[1] - p1[1]) * (px - p1[0])
    e1 = (p0[0] - p2[0]) * (py - p2[1]) - (p0[1] - p2[1]) * (px - p2[0])
    e2 = (p1[0] - p0[0]) * (py - p0[1]) - (p1[1] - p0[1]) * (px - p0[0])
    inside = (e0 >= 0) & (e1 >= 0) & (e2 >= 0)
    if not inside.any():
        return
    inv_z = (e0 * w0 + e1 * w1 + e2 * w2) / area
    z = 1.0 / np.maximum(inv_z, 1e-12)
    tile_d = depth[ymin:ymax + 1, xmin:xmax + 1]
    visible = inside & (z <= tile_d * (1.0 + 1e-9) + 1e-9)
    img[ymin:ymax + 1, xmin:xmax + 1][visible] = shade
