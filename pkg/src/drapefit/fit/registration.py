"""The two registrations: proxy-into-clothing and proxy-onto-body.

Both run a fixed-budget Adam schedule with per-group step sizes and step
decay, track the best accepted iterate, and record a full per-term trace.
Everything is deterministic: zero-initialized parameters, single-threaded
torch, and a fixed iteration count.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch
from sklearn.base import BaseEstimator

from ..body.model import BodyModel, BodyParams
from ..corr.types import CorrespondenceSet
from ..geom import TriMesh
from .losses import BodyLosses, ClothingLosses, Params


@dataclass
class LossWeights:
    """Weights of every registration term (both objectives share the bag)."""

    c2s: float = 1.0
    shape: float = 1e-3
    pose: float = 1e-3
    lap: float = 1e-2
    pene: float = 10.0
    corres: float = 1.0
    b2s: float = 1.0
    s2b: float = 1.0
    d: float = 1e-2
    s: float = 1e-2
    body_lap: float = 1.0

    @staticmethod
    def clothing_defaults() -> "LossWeights":
        return LossWeights()

    @staticmethod
    def body_defaults() -> "LossWeights":
        return LossWeights()


@dataclass
class TraceStep:
    step: int
    stage: str
    total: float
    terms: dict[str, float]
    lr: float
    accepted: bool


@dataclass
class OptimizeTrace:
    steps: list[TraceStep] = field(default_factory=list)
    stage_boundaries: list[int] = field(default_factory=list)

    def accepted_totals(self) -> list[float]:
        return [s.total for s in self.steps if s.accepted]

    def accepted_totals_by_stage(self) -> dict[str, list[float]]:
        """Accepted-loss sequences per stage (stages optimize different
        objectives, so monotonicity holds within a stage)."""
        out: dict[str, list[float]] = {}
        for s in self.steps:
            if s.accepted:
                out.setdefault(s.stage, []).append(s.total)
        return out

    def to_dict(self) -> dict:
        return {
            "stage_boundaries": self.stage_boundaries,
            "steps": [{"step": s.step, "stage": s.stage, "total": s.total,
                       "lr": s.lr, "accepted": s.accepted, **s.terms}
                      for s in self.steps],
        }


class _Budget:
    """Shared Adam loop: fixed budget, step decay, best-iterate tracking."""

    def __init__(self, lr_by_group: dict[str, float], decay_every: int = 100,
                 decay: float = 0.7):
        self.lr_by_group = lr_by_group
        self.decay_every = decay_every
        self.decay = decay

    def run(self, stage: str, params: Params, active: tuple[str, ...],
            weighted_terms, steps: int, trace: OptimizeTrace,
            best: dict, lr_scale: float = 1.0) -> None:
        params.requires_grad_(active)
        groups = [{"params": [params.tensors()[name]],
                   "lr": self.lr_by_group[name] * lr_scale} for name in active]
        opt = torch.optim.Adam(groups)
        sched = torch.optim.lr_scheduler.StepLR(opt, self.decay_every,
                                                gamma=self.decay)
        base_step = len(trace.steps)
        trace.stage_boundaries.append(base_step)

        def bookkeep(k, total, values, lr):
            val = float(total)
            accepted = val <= best["total"]
            if accepted:
                best["total"] = val
                best["params"] = {n: t.detach().clone()
                                  for n, t in params.tensors().items()}
            trace.steps.append(TraceStep(
                step=base_step + k, stage=stage, total=val,
                terms={n: float(v) for n, v in values.items()},
                lr=lr, accepted=accepted))

        for k in range(steps):
            opt.zero_grad()
            total, values = weighted_terms(params)
            if not torch.isfinite(total):
                raise FloatingPointError(
                    f"non-finite loss at {stage} step {k}; trace preserved")
            bookkeep(k, total, values, opt.param_groups[0]["lr"])
            total.backward()
            opt.step()
            sched.step()
        with torch.no_grad():
            total, values = weighted_terms(params)
        bookkeep(steps, total, values, opt.param_groups[0]["lr"])
        # park at the best iterate so later stages start from it
        with torch.no_grad():
            for name, tensor in params.tensors().items():
                tensor.copy_(best["params"][name])


def _weighted(losses, weights_of) -> callable:
    def evaluate(params: Params):
        values = {}
        total = torch.zeros((), dtype=torch.float64)
        for name, weight in weights_of.items():
            if weight == 0.0:
                continue
            value = getattr(losses, name)(params)
            values[name] = value
            total = total + weight * value
        return total, values
    return evaluate


def _to_body_params(params: Params) -> BodyParams:
    t = lambda x: x.detach().numpy().copy()
    return BodyParams(theta=t(params.theta), beta=t(params.beta),
                      d=t(params.d), s=t(params.s), trans=t(params.trans))


class ClothingRegistration(BaseEstimator):
    """Fit proxy pose and shape into a garment from UV correspondences.

    The garment may cover only part of the body (even a single loop); the
    pose prior pulls unconstrained joints toward rest.
    """

    def __init__(self, model: BodyModel, weights: LossWeights | None = None,
                 steps: int = 500, lr_theta: float = 0.05,
                 lr_beta: float = 0.05, lr_trans: float = 0.05,
                 margin: float = 0.002):
        self.model = model
        self.weights = weights
        self.steps = steps
        self.lr_theta = lr_theta
        self.lr_beta = lr_beta
        self.lr_trans = lr_trans
        self.margin = margin

    PENE_RAMPS = (4.0, 16.0, 64.0)  # penalty continuation: late stages are
    REFINE_LR = (0.4, 0.2, 0.1)     # penetration-dominated at gentler steps

    def fit(self, garment: TriMesh, corr: CorrespondenceSet):
        weights = self.weights or LossWeights.clothing_defaults()
        losses = ClothingLosses(self.model, garment, corr, margin=self.margin)
        params = Params(self.model)
        trace = OptimizeTrace()
        budget = _Budget({"theta": self.lr_theta, "beta": self.lr_beta,
                          "trans": self.lr_trans})
        align = {"c2s": weights.c2s, "shape": weights.shape,
                 "pose": weights.pose, "lap": weights.lap,
                 "pene": weights.pene}
        steps_align = int(self.steps * 0.5)
        steps_refine = (self.steps - steps_align) // len(self.PENE_RAMPS)
        active = ("theta", "beta", "trans")
        best = {"total": float("inf"), "params": None}

        def rebase(evaluate):
            with torch.no_grad():
                best["total"] = float(evaluate(params)[0])
                best["params"] = {n: t.detach().clone()
                                  for n, t in params.tensors().items()}

        eval_align = _weighted(losses, align)
        rebase(eval_align)
        try:
            budget.run("align", params, active, eval_align, steps_align,
                       trace, best)
            for level, (ramp, lr) in enumerate(zip(self.PENE_RAMPS,
                                                   self.REFINE_LR)):
                evaluate = _weighted(losses,
                                     dict(align, pene=weights.pene * ramp))
                rebase(evaluate)
                budget.run(f"refine{level}", params, active, evaluate,
                           steps_refine, trace, best, lr_scale=lr)
        finally:
            self.trace_ = trace
        self.params_ = _to_body_params(params)
        return self

    def posed_mesh(self) -> TriMesh:
        from ..body.model import lbs_forward

        return lbs_forward(self.model, self.params_)


class BodyRegistration(BaseEstimator):
    """Fit the extended proxy (pose, shape, displacements, axis scale)
    onto a target body from noise-filtered vertex correspondences.

    Stage A aligns pose/shape/scale through the correspondence term; stage
    B adds the bidirectional surface terms and releases the per-vertex
    displacement field.
    """

    def __init__(self, model: BodyModel, weights: LossWeights | None = None,
                 stage_a_steps: int = 400, stage_b_steps: int = 400,
                 lr_theta: float = 0.05, lr_beta: float = 0.05,
                 lr_s: float = 0.01, lr_d: float = 0.005,
                 lr_trans: float = 0.05):
        self.model = model
        self.weights = weights
        self.stage_a_steps = stage_a_steps
        self.stage_b_steps = stage_b_steps
        self.lr_theta = lr_theta
        self.lr_beta = lr_beta
        self.lr_s = lr_s
        self.lr_d = lr_d
        self.lr_trans = lr_trans

    def fit(self, target: TriMesh, corr: CorrespondenceSet):
        weights = self.weights or LossWeights.body_defaults()
        losses = BodyLosses(self.model, target, corr)
        params = Params(self.model)
        trace = OptimizeTrace()
        budget = _Budget({"theta": self.lr_theta, "beta": self.lr_beta,
                          "s": self.lr_s, "d": self.lr_d,
                          "trans": self.lr_trans})
        stage_a = {"corres": weights.corres, "shape": weights.shape,
                   "s": weights.s}
        stage_b = {"corres": weights.corres, "b2s": weights.b2s,
                   "s2b": weights.s2b, "shape": weights.shape,
                   "d": weights.d, "s": weights.s, "lap": weights.body_lap}
        best = {"total": float("inf"), "params": None}
        eval_a = _weighted(losses, stage_a)
        with torch.no_grad():
            best["total"] = float(eval_a(params)[0])
            best["params"] = {n: t.clone() for n, t in params.tensors().items()}
        try:
            budget.run("stage_a", params, ("theta", "beta", "s", "trans"),
                       eval_a, self.stage_a_steps, trace, best)
            eval_b = _weighted(losses, stage_b)
            with torch.no_grad():
                best["total"] = float(eval_b(params)[0])
                best["params"] = {n: t.detach().clone()
                                  for n, t in params.tensors().items()}
            budget.run("stage_b", params,
                       ("theta", "beta", "s", "d", "trans"),
                       eval_b, self.stage_b_steps, trace, best)
        finally:
            self.trace_ = trace
        self.params_ = _to_body_params(params)
        return self

    def posed_mesh(self) -> TriMesh:
        from ..body.model import lbs_forward

        return lbs_forward(self.model, self.params_)


def register_clothing(garment: TriMesh, corr: CorrespondenceSet,
                      model: BodyModel, weights: LossWeights | None = None,
                      **kwargs) -> tuple[BodyParams, OptimizeTrace]:
    reg = ClothingRegistration(model, weights=weights, **kwargs).fit(garment, corr)
    return reg.params_, reg.trace_


def register_body(target: TriMesh, corr: CorrespondenceSet, model: BodyModel,
                  weights: LossWeights | None = None,
                  **kwargs) -> tuple[BodyParams, OptimizeTrace]:
    reg = BodyRegistration(model, weights=weights, **kwargs).fit(target, corr)
    return reg.params_, reg.trace_
