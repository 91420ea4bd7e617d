"""Evaluation metrics: chamfer, point-to-mesh, interpenetration ratio, and
correspondence errors (Euclidean / geodesic).

CD and P2M use the squared-distance convention; pass ``squared=False`` for
the unsquared variants. All metrics are pure and deterministic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np
from scipy.spatial import cKDTree

from .corr.types import CorrespondenceSet
from .geom import TriMesh, geodesic_distances, nearest_surface_points, signed_heights
from .validation import as_points


@dataclass
class MetricsReport:
    chamfer: float | None = None
    point_to_mesh: float | None = None
    interpenetration_pct: float | None = None
    mean_euclidean_error: float | None = None
    mean_geodesic_error: float | None = None
    n_garment_vertices: int | None = None
    n_body_vertices: int | None = None
    frame: str = "normalized"

    def to_json(self, **extra) -> str:
        doc = {k: v for k, v in asdict(self).items() if v is not None}
        doc.update(extra)
        return json.dumps(doc, indent=1, sort_keys=True)

    def csv_row(self) -> str:
        fields = [self.chamfer, self.point_to_mesh, self.interpenetration_pct,
                  self.mean_euclidean_error, self.mean_geodesic_error]
        return ",".join("" if v is None else f"{v:.9g}" for v in fields)

    @staticmethod
    def csv_header() -> str:
        return "chamfer,point_to_mesh,interpenetration_pct,mee,mge"


def chamfer(a, b, squared: bool = True) -> float:
    """Symmetric mean nearest-neighbor distance between two point sets:
    0.5 (mean_a min_b + mean_b min_a), squared by default."""
    a = as_points(a, "point set A")
    b = as_points(b, "point set B")
    if len(a) == 0 or len(b) == 0:
        raise ValueError("chamfer distance of an empty point set")
    d_ab, _ = cKDTree(b).query(a)
    d_ba, _ = cKDTree(a).query(b)
    if squared:
        d_ab, d_ba = d_ab ** 2, d_ba ** 2
    return 0.5 * (float(d_ab.mean()) + float(d_ba.mean()))


def point_to_mesh(points, mesh: TriMesh, squared: bool = True) -> float:
    """Mean (squared) distance from each point to its nearest surface point."""
    points = as_points(points, "points")
    if len(points) == 0:
        raise ValueError("point_to_mesh of an empty point set")
    _, _, _, dist = nearest_surface_points(mesh, points)
    return float((dist ** 2 if squared else dist).mean())


def interpenetration_ratio(garment: TriMesh, body: TriMesh) -> float:
    """Percent of garment vertices strictly inside the body (pseudonormal
    sign at the nearest body surface point)."""
    h, _, _, _ = signed_heights(body, garment.vertices)
    return 100.0 * float((h < 0.0).mean())


def corr_errors(pred: CorrespondenceSet, truth: CorrespondenceSet,
                target_mesh: TriMesh) -> tuple[float, float]:
    """(MEE, MGE) between predicted and true targets, over the overlap.

    MEE is the mean Euclidean distance between target points; MGE the mean
    edge-graph geodesic distance between target vertices on the target mesh.
    """
    if len(pred) != len(truth):
        raise ValueError("correspondence sets cover different sources")
    both = pred.valid & truth.valid
    if not both.any():
        raise ValueError("no overlapping valid entries")

    pred_pos = pred.target_positions(target_mesh)[both]
    true_pos = truth.target_positions(target_mesh)[both]
    mee = float(np.linalg.norm(pred_pos - true_pos, axis=1).mean())

    pred_v = pred.target_vertices_on(target_mesh)[both]
    true_v = truth.target_vertices_on(target_mesh)[both]
    geo = geodesic_distances(target_mesh, pred_v, true_v)
    mge = float(np.mean(geo))
    return mee, mge


def evaluate_fit(garment: TriMesh, body: TriMesh,
                 ground_truth_garment: TriMesh | None = None) -> MetricsReport:
    """Bundle the draping metrics for one fitted garment."""
    report = MetricsReport(
        interpenetration_pct=interpenetration_ratio(garment, body),
        n_garment_vertices=garment.n_vertices,
        n_body_vertices=body.n_vertices,
    )
    if ground_truth_garment is not None:
        report.chamfer = chamfer(garment.vertices,
                                 ground_truth_garment.vertices)
        report.point_to_mesh = point_to_mesh(garment.vertices,
                                             ground_truth_garment)
    return report
