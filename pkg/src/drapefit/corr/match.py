"""Cosine-similarity matching between per-vertex feature sets."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ..render import VertexFeatures
from .types import CorrespondenceSet


class CosineMatcher(BaseEstimator):
    """Argmax-cosine matcher: fit on target features, predict for sources.

    Unobserved target vertices are excluded from candidacy; unobserved
    source vertices come back invalid. Ties break to the lowest target
    index, so matching is deterministic.
    """

    def __init__(self, block_size: int = 1024):
        self.block_size = block_size

    def fit(self, target: VertexFeatures, y=None):
        normed = target.l2_normalized()
        self.target_observed_ = np.where(normed.observed)[0]
        if len(self.target_observed_) == 0:
            raise ValueError("no observed target vertices to match against")
        self.target_features_ = normed.features[self.target_observed_]
        return self

    def predict(self, source: VertexFeatures) -> CorrespondenceSet:
        if not hasattr(self, "target_features_"):
            raise RuntimeError("CosineMatcher.predict called before fit")
        if source.features.shape[1] != self.target_features_.shape[1]:
            raise ValueError("source/target channel counts differ")
        normed = source.l2_normalized()
        n = len(normed.features)
        best_idx = np.full(n, -1, dtype=np.int64)
        best_score = np.zeros(n)
        obs = np.where(normed.observed)[0]
        for start in range(0, len(obs), self.block_size):
            rows = obs[start:start + self.block_size]
            sims = normed.features[rows] @ self.target_features_.T
            arg = np.argmax(sims, axis=1)  # first max: lowest index wins ties
            best_idx[rows] = self.target_observed_[arg]
            best_score[rows] = sims[np.arange(len(rows)), arg]
        valid = normed.observed.copy()
        return CorrespondenceSet.from_vertex_indices(best_idx, valid,
                                                     score=best_score)


def match_cosine(source: VertexFeatures,
                 target: VertexFeatures) -> CorrespondenceSet:
    """One-shot convenience wrapper over CosineMatcher."""
    return CosineMatcher().fit(target).predict(source)
