"""Differentiable loss terms for the two registrations.

Penalty norms are per-component means, so the default weights balance the
data terms at the same scale regardless of joint or basis counts.

Nearest-point footpoints (and penetration contact frames) are re-queried
on every evaluation and then held fixed inside the expression; by the
envelope theorem the gradients through the posed vertices are exact where
the nearest point is unique, which central finite differences confirm.
"""
from __future__ import annotations

import numpy as np
import torch

from ..body.model import BodyModel, lbs_forward_torch
from ..geom import TriMesh, NearestPointIndex, laplacian, signed_heights, uv_to_surface_batch

PENETRATION_MARGIN = 0.002


def _sparse_torch(matrix) -> torch.Tensor:
    coo = matrix.tocoo()
    idx = torch.as_tensor(np.vstack([coo.row, coo.col]), dtype=torch.int64)
    val = torch.as_tensor(coo.data, dtype=torch.float64)
    return torch.sparse_coo_tensor(idx, val, size=coo.shape).coalesce()


def _safe_norm(x: torch.Tensor, dim=-1) -> torch.Tensor:
    return torch.sqrt((x * x).sum(dim=dim) + 1e-30)


def _t(a) -> torch.Tensor:
    return torch.as_tensor(np.array(a, dtype=np.float64))


class Params:
    """One bag of torch parameter tensors for the LBS chain."""

    def __init__(self, model: BodyModel, device=None):
        t = lambda a: torch.as_tensor(np.asarray(a, dtype=np.float64))
        self.theta = t(np.zeros((model.n_joints, 3)))
        self.beta = t(np.zeros(model.n_shape))
        self.d = t(np.zeros((model.n_vertices, 3)))
        self.s = t(np.ones(3))
        self.trans = t(np.zeros(3))

    def pose(self, model: BodyModel) -> torch.Tensor:
        return lbs_forward_torch(model, self.theta, self.beta, self.d,
                                 self.s, self.trans)

    def tensors(self) -> dict[str, torch.Tensor]:
        return {"theta": self.theta, "beta": self.beta, "d": self.d,
                "s": self.s, "trans": self.trans}

    def requires_grad_(self, names):
        for name, tensor in self.tensors().items():
            tensor.requires_grad_(name in names)
        return self


class ClothingLosses:
    """Terms of the proxy-into-clothing objective over (theta, beta)."""

    TERMS = ("c2s", "shape", "pose", "lap", "pene")

    def __init__(self, model: BodyModel, garment: TriMesh, corr,
                 margin: float = PENETRATION_MARGIN):
        self.model = model
        self.margin = margin
        valid = corr.valid
        if valid.sum() < 50:
            raise ValueError(
                f"need at least 50 valid correspondences, got {int(valid.sum())}")
        tri, bary, off = uv_to_surface_batch(model.atlas_mesh(),
                                             corr.target_uv[valid])
        atlas_tris = model.atlas_mesh().triangles
        self.anchor_vids = torch.as_tensor(np.array(atlas_tris[tri]))          # (V, 3)
        self.anchor_bary = _t(bary)                     # (V, 3)
        self.anchor_x = _t(garment.vertices[valid])     # (V, 3)
        self.garment_x = _t(garment.vertices)           # (N, 3)
        self.garment_np = garment.vertices
        lap = laplacian(model.rest_mesh(), "uniform", normalized=True)
        self.lap_t = _sparse_torch(lap)
        self.template = _t(model.template)

    def c2s(self, params: Params) -> torch.Tensor:
        posed = params.pose(self.model)
        anchors = (posed[self.anchor_vids] *
                   self.anchor_bary[:, :, None]).sum(dim=1)
        return ((self.anchor_x - anchors) ** 2).sum(dim=1).mean()

    def shape(self, params: Params) -> torch.Tensor:
        return (params.beta ** 2).mean()

    def pose(self, params: Params) -> torch.Tensor:
        return (params.theta ** 2).mean()

    def lap(self, params: Params) -> torch.Tensor:
        posed = params.pose(self.model)
        disp = posed - self.template
        smoothed = torch.sparse.mm(self.lap_t, disp)
        return (smoothed ** 2).sum(dim=1).mean()

    def pene(self, params: Params) -> torch.Tensor:
        posed = params.pose(self.model)
        with torch.no_grad():
            proxy = TriMesh(posed.detach().numpy(), self.model.triangles)
            h, tri, bary, _ = signed_heights(proxy, self.garment_np)
            sign = _t(np.where(h >= 0.0, 1.0, -1.0))
            vids = torch.as_tensor(np.array(self.model.triangles[tri]))
            bary_t = _t(bary)
        feet = (posed[vids] * bary_t[:, :, None]).sum(dim=1)
        height = sign * _safe_norm(self.garment_x - feet)
        return torch.clamp(self.margin - height, min=0.0).pow(2).mean()


class BodyLosses:
    """Terms of the proxy-onto-body objective over (theta, beta, d, s)."""

    TERMS = ("b2s", "s2b", "corres", "shape", "d", "s", "lap")

    def __init__(self, model: BodyModel, target: TriMesh, corr):
        self.model = model
        self.target = target
        self.target_x = _t(target.vertices)
        self.target_index = NearestPointIndex(target)
        valid = corr.valid
        self.corr_proxy_vid = torch.as_tensor(np.array(corr.target_vertex[valid]))
        self.corr_target_x = _t(target.vertices[valid])
        lap = laplacian(model.rest_mesh(), "uniform", normalized=True)
        self.lap_t = _sparse_torch(lap)

    def corres(self, params: Params) -> torch.Tensor:
        posed = params.pose(self.model)
        matched = posed[self.corr_proxy_vid]
        return ((self.corr_target_x - matched) ** 2).sum(dim=1).mean()

    def b2s(self, params: Params) -> torch.Tensor:
        posed = params.pose(self.model)
        with torch.no_grad():
            tri, bary, _ = self.target_index.query(posed.detach().numpy())
            corners = _t(self.target.corners[tri])
            feet = (corners * _t(bary)[:, :, None]).sum(dim=1)
        return ((posed - feet) ** 2).sum(dim=1).mean()

    def s2b(self, params: Params) -> torch.Tensor:
        posed = params.pose(self.model)
        with torch.no_grad():
            proxy = TriMesh(posed.detach().numpy(), self.model.triangles)
            tri, bary, _, _ = _query_on(proxy, self.target.vertices)
            vids = torch.as_tensor(np.array(self.model.triangles[tri]))
            bary_t = _t(bary)
        feet = (posed[vids] * bary_t[:, :, None]).sum(dim=1)
        return ((self.target_x - feet) ** 2).sum(dim=1).mean()

    def shape(self, params: Params) -> torch.Tensor:
        return (params.beta ** 2).mean()

    def d(self, params: Params) -> torch.Tensor:
        return (params.d ** 2).sum(dim=1).mean()

    def s(self, params: Params) -> torch.Tensor:
        return ((params.s - 1.0) ** 2).mean()

    def lap(self, params: Params) -> torch.Tensor:
        smoothed = torch.sparse.mm(self.lap_t, params.d)
        return (smoothed ** 2).sum(dim=1).mean()


def _query_on(mesh: TriMesh, points):
    from ..geom import nearest_surface_points

    return nearest_surface_points(mesh, points)
