from .losses import BodyLosses, ClothingLosses, Params, PENETRATION_MARGIN
from .registration import (
    BodyRegistration,
    ClothingRegistration,
    LossWeights,
    OptimizeTrace,
    register_body,
    register_clothing,
)
from .io import load_registration, save_registration

__all__ = [
    "BodyLosses", "ClothingLosses", "Params", "PENETRATION_MARGIN",
    "BodyRegistration", "ClothingRegistration", "LossWeights",
    "OptimizeTrace", "register_body", "register_clothing",
    "load_registration", "save_registration",
]
