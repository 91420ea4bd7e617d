from .model import (
    BodyModel,
    BodyParams,
    interpolate,
    lbs_forward,
    lbs_forward_torch,
    rodrigues,
    validate_model,
)
from .archive import ArchiveError, load_model, save_model
from .synth import garment_synth, region_mask, synth_body, synth_poncho, synth_skirt

__all__ = [
    "BodyModel", "BodyParams", "interpolate", "lbs_forward",
    "lbs_forward_torch", "rodrigues", "validate_model",
    "ArchiveError", "load_model", "save_model",
    "garment_synth", "region_mask", "synth_body", "synth_poncho", "synth_skirt",
]
