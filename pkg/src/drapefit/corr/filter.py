"""Energy-based iterative noise filter for correspondence fields.

Each iteration grows the neighborhood (K = iter^2), recomputes the local
rigidity energies over the surviving correspondences, and invalidates
vertices whose energy exceeds mean + 0.5 std (strictly, so a perfect field
is a fixed point). Stops early once the valid count stabilizes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from ..geom import TriMesh, k_ring_matrix
from .arap import MIN_SUPPORT, arap_energies
from .types import CorrespondenceSet

MAX_ITERATIONS = 4
SIGMA_FACTOR = 0.5
EARLY_STOP_REL_CHANGE = 0.005  # < 0.5% change in the valid count stops


@dataclass
class FilterIteration:
    k: int
    mean_energy: float
    std_energy: float
    threshold: float
    removed: int
    remaining: int


@dataclass
class FilterReport:
    iterations: list[FilterIteration] = field(default_factory=list)

    @property
    def k_schedule(self) -> list[int]:
        return [it.k for it in self.iterations]

    def to_dict(self) -> dict:
        return {"iterations": [vars(it) for it in self.iterations]}


class CorrespondenceFilter(BaseEstimator):
    """Iterative outlier removal over a source mesh's correspondences."""

    def __init__(self, max_iterations: int = MAX_ITERATIONS,
                 sigma_factor: float = SIGMA_FACTOR,
                 early_stop_rel_change: float = EARLY_STOP_REL_CHANGE,
                 early_stop: bool = True):
        self.max_iterations = max_iterations
        self.sigma_factor = sigma_factor
        self.early_stop_rel_change = early_stop_rel_change
        self.early_stop = early_stop

    def fit(self, source_mesh: TriMesh, y=None):
        self.mesh_ = source_mesh
        self._rings: dict[int, object] = {}
        lo, hi = source_mesh.bbox()
        # energies below SVD roundoff are exact zeros: keeps the all-perfect
        # field a fixed point of the strict threshold
        self._energy_floor = (1e-10 * float(np.linalg.norm(hi - lo))) ** 2
        return self

    def _ring(self, k: int):
        if k not in self._rings:
            self._rings[k] = k_ring_matrix(self.mesh_, k)
        return self._rings[k]

    def transform(self, corr: CorrespondenceSet,
                  target_positions: np.ndarray
                  ) -> tuple[CorrespondenceSet, FilterReport]:
        """Returns (filtered copy, per-iteration report); sets ``report_``."""
        if not hasattr(self, "mesh_"):
            raise RuntimeError("CorrespondenceFilter.transform before fit")
        if self.max_iterations > MAX_ITERATIONS:
            raise ValueError(f"at most {MAX_ITERATIONS} iterations")
        out = corr.copy()
        valid = out.valid.copy()
        source = self.mesh_.vertices
        report = FilterReport()

        for it in range(1, self.max_iterations + 1):
            k = it * it
            before = int(valid.sum())
            if before == 0:
                break
            energies, support = arap_energies(source, target_positions, valid,
                                              self._ring(k))
            energies[energies < self._energy_floor] = 0.0
            supported = valid & (support >= MIN_SUPPORT)
            # stats over the positive energies: on continuous inputs every
            # energy is positive so this is the plain mean/std; on fields
            # with exact zeros it keeps the threshold at the error scale
            # instead of being diluted toward zero by the perfect mass
            positive = supported & (energies > 0.0)
            if positive.any():
                mu = float(energies[positive].mean())
                sigma = float(energies[positive].std())
            else:
                mu = sigma = 0.0
            eps = mu + self.sigma_factor * sigma
            # strict inequality: sigma == 0 (all-perfect field) removes nothing
            drop = supported & (energies > eps)
            valid &= ~drop
            after = int(valid.sum())
            report.iterations.append(FilterIteration(
                k=k, mean_energy=mu, std_energy=sigma, threshold=eps,
                removed=before - after, remaining=after))
            out.energy = energies
            out.low_support = valid & (support < MIN_SUPPORT)
            if after == 0:
                raise ValueError(
                    "noise filter invalidated every correspondence; "
                    "the field is unusable")
            if self.early_stop and \
                    (before - after) / before < self.early_stop_rel_change:
                break

        if not valid.any():
            raise ValueError("noise filter left no valid correspondences; "
                             "the field is unusable")
        out.valid = valid
        if out.target_vertex is not None:
            out.target_vertex = np.where(valid, out.target_vertex, -1)
        self.report_ = report
        return out, report


def filter_iterate(source_mesh: TriMesh, corr: CorrespondenceSet,
                   target_positions: np.ndarray, **kwargs):
    """Functional form of CorrespondenceFilter (fit + transform)."""
    filt = CorrespondenceFilter(**kwargs).fit(source_mesh)
    return filt.transform(corr, np.asarray(target_positions, dtype=np.float64))
