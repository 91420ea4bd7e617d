"""Clothing-to-proxy correspondence providers and the UV loss metric.

The learned predictor the method builds on is not shipped; correspondences
enter through one of three interchangeable providers:

* oracle — ground-truth UVs carried by synthetic offset-surface garments;
* descriptor — built-in geometric descriptors matched by cosine (weak);
* file — a `.corr` sidecar written by any external predictor.
"""
from __future__ import annotations

import numpy as np

from ..body.model import BodyModel
from ..geom import TriMesh
from .descriptor import descriptor_features
from .match import match_cosine
from .types import CorrespondenceSet, load_corr

PROVIDERS = ("oracle", "descriptor", "file")


def clothing_correspondences(garment: TriMesh, provider: str,
                             model: BodyModel | None = None,
                             corr_path=None,
                             oracle: CorrespondenceSet | None = None
                             ) -> CorrespondenceSet:
    """UV targets on the proxy atlas for every garment vertex."""
    if provider == "oracle":
        corr = oracle if oracle is not None else getattr(
            garment, "oracle_uv_corr", None)
        if corr is None:
            raise ValueError(
                "oracle provider needs a synthetic garment carrying "
                "ground-truth UVs (garment_synth output or its .corr sidecar)")
        if len(corr) != garment.n_vertices:
            raise ValueError("oracle correspondence count mismatch")
        return corr.copy()

    if provider == "file":
        if corr_path is None:
            raise ValueError("file provider needs corr_path")
        return load_corr(corr_path, expected_vertices=garment.n_vertices)

    if provider == "descriptor":
        if model is None:
            raise ValueError("descriptor provider needs the proxy model")
        return descriptor_clothing_correspondences(garment, model)

    raise ValueError(f"unknown provider {provider!r}; expected {PROVIDERS}")


def descriptor_clothing_correspondences(garment: TriMesh,
                                        model: BodyModel) -> CorrespondenceSet:
    """Match garment vertices onto proxy vertices by shape descriptors,
    then read the matched vertices' atlas UVs."""
    proxy_mesh = model.rest_mesh()
    garment_feats = descriptor_features(garment)
    proxy_feats = descriptor_features(proxy_mesh)
    matched = match_cosine(garment_feats, proxy_feats)
    uv = np.zeros((garment.n_vertices, 2))
    ok = matched.valid
    uv[ok] = model.uvs[matched.target_vertex[ok]]
    out = CorrespondenceSet.from_uv(uv, ok)
    out.score = matched.score
    return out


def eval_uv_loss(pred: CorrespondenceSet, truth: CorrespondenceSet) -> float:
    """Mean Euclidean distance in UV space over entries valid in both."""
    if pred.kind != "uv" or truth.kind != "uv":
        raise ValueError("UV loss needs UV-valued correspondences")
    if len(pred) != len(truth):
        raise ValueError("correspondence sets cover different garments")
    both = pred.valid & truth.valid
    if not both.any():
        raise ValueError("no overlapping valid entries")
    diff = pred.target_uv[both] - truth.target_uv[both]
    return float(np.linalg.norm(diff, axis=1).mean())
