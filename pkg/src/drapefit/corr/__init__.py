from .types import CorrespondenceSet, load_corr, save_corr
from .fuse import (
    DEFAULT_ALPHA,
    DEFAULT_W_MIN,
    FeatureStack,
    aggregate,
    fuse_timesteps,
    timestep_weight,
)
from .match import CosineMatcher, match_cosine
from .arap import arap_energies, arap_energy, fit_rotation, rotation_fit_energy
from .filter import (
    CorrespondenceFilter,
    FilterIteration,
    FilterReport,
    filter_iterate,
)
from .providers import clothing_correspondences, eval_uv_loss
from .descriptor import descriptor_features
from .fmap import load_fmap, load_fmap_as_feature_map, save_fmap

__all__ = [
    "CorrespondenceSet", "save_corr", "load_corr",
    "FeatureStack", "fuse_timesteps", "timestep_weight", "aggregate",
    "DEFAULT_W_MIN", "DEFAULT_ALPHA",
    "CosineMatcher", "match_cosine",
    "arap_energies", "arap_energy", "fit_rotation", "rotation_fit_energy",
    "CorrespondenceFilter", "FilterIteration", "FilterReport", "filter_iterate",
    "clothing_correspondences", "eval_uv_loss", "descriptor_features",
    "save_fmap", "load_fmap", "load_fmap_as_feature_map",
]
