from .material import MaterialParams, PRESETS, material_preset
from .cloth import ClothConstraints, build_cloth
from .solver import ClothState, SimConfig, step
from .transfer import DrapeResult, MODES, drape

__all__ = [
    "MaterialParams", "PRESETS", "material_preset",
    "ClothConstraints", "build_cloth",
    "ClothState", "SimConfig", "step",
    "DrapeResult", "MODES", "drape",
]
