"""Perspective camera rigs looking at the origin of the unit frame."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_FOV_DEG = 40.0
DEFAULT_DISTANCE = 2.2
DEFAULT_RESOLUTION = 512
DEFAULT_ELEVATIONS = (30.0, 15.0)
DEFAULT_AZIMUTHS_PER_RING = 18
NEAR, FAR = 0.05, 10.0


@dataclass(frozen=True)
class ViewSpec:
    """One camera: orbit angles + perspective intrinsics, aimed at the origin."""

    elevation: float       # degrees above the xz-plane
    azimuth: float         # degrees around +y, 0 looks down -z toward origin
    fov: float = DEFAULT_FOV_DEG          # vertical, degrees
    distance: float = DEFAULT_DISTANCE    # eye distance to the origin
    resolution: int = DEFAULT_RESOLUTION  # square images

    @property
    def eye(self) -> np.ndarray:
        el = np.deg2rad(self.elevation)
        az = np.deg2rad(self.azimuth)
        return self.distance * np.array([
            np.cos(el) * np.sin(az), np.sin(el), np.cos(el) * np.cos(az)])

    def view_matrix(self) -> np.ndarray:
        """World -> camera (camera looks down -z, y up). Row-major 4x4."""
        eye = self.eye
        forward = -eye / np.linalg.norm(eye)
        up = np.array([0.0, 1.0, 0.0])
        if abs(np.dot(forward, up)) > 0.999:
            up = np.array([0.0, 0.0, 1.0])
        right = np.cross(forward, up)
        right /= np.linalg.norm(right)
        true_up = np.cross(right, forward)
        rot = np.stack([right, true_up, -forward])
        mat = np.eye(4)
        mat[:3, :3] = rot
        mat[:3, 3] = -rot @ eye
        return mat

    def projection_matrix(self) -> np.ndarray:
        """OpenGL-style perspective matrix (aspect 1, principal point centered)."""
        f = 1.0 / np.tan(np.deg2rad(self.fov) / 2.0)
        mat = np.zeros((4, 4))
        mat[0, 0] = f
        mat[1, 1] = f
        mat[2, 2] = (FAR + NEAR) / (NEAR - FAR)
        mat[2, 3] = 2.0 * FAR * NEAR / (NEAR - FAR)
        mat[3, 2] = -1.0
        return mat

    def project(self, points: np.ndarray):
        """World points -> (pixel xy (y down), view depth -z_cam)."""
        cam = points @ self.view_matrix()[:3, :3].T + self.view_matrix()[:3, 3]
        depth = -cam[:, 2]
        safe = np.maximum(depth, 1e-12)
        f = 1.0 / np.tan(np.deg2rad(self.fov) / 2.0)
        ndc_x = f * cam[:, 0] / safe
        ndc_y = f * cam[:, 1] / safe
        res = self.resolution
        px = (ndc_x + 1.0) * 0.5 * res
        py = (1.0 - ndc_y) * 0.5 * res
        return np.stack([px, py], axis=1), depth


def make_rig(elevations=DEFAULT_ELEVATIONS,
             azimuths_per_ring: int = DEFAULT_AZIMUTHS_PER_RING,
             fov: float = DEFAULT_FOV_DEG,
             distance: float = DEFAULT_DISTANCE,
             resolution: int = DEFAULT_RESOLUTION) -> list[ViewSpec]:
    """Orbit rig: per elevation, azimuths uniformly spaced starting at 0.

    The default (elevations 30 and 15, 18 azimuths each) gives 36 views.
    """
    if azimuths_per_ring < 1:
        raise ValueError("azimuths_per_ring must be >= 1")
    views = []
    for el in elevations:
        for k in range(azimuths_per_ring):
            views.append(ViewSpec(elevation=float(el),
                                  azimuth=360.0 * k / azimuths_per_ring,
                                  fov=fov, distance=distance,
                                  resolution=resolution))
    return views


def save_rig(views: list[ViewSpec], path) -> None:
    """Camera JSON: per-view 4x4 view/projection matrices, row-major lists."""
    doc = {"views": [{
        "elevation": v.elevation, "azimuth": v.azimuth, "fov": v.fov,
        "distance": v.distance, "resolution": v.resolution,
        "view_matrix": v.view_matrix().reshape(-1).tolist(),
        "projection_matrix": v.projection_matrix().reshape(-1).tolist(),
    } for v in views]}
    Path(path).write_text(json.dumps(doc, indent=1))


def load_rig(path) -> list[ViewSpec]:
    doc = json.loads(Path(path).read_text())
    return [ViewSpec(elevation=v["elevation"], azimuth=v["azimuth"],
                     fov=v["fov"], distance=v["distance"],
                     resolution=v["resolution"]) for v in doc["views"]]
