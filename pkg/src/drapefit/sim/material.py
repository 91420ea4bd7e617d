"""Cloth material parameters and the three shipped presets.

The Lamé pair maps to constraint compliances: stretch compliance is
1 / (mu * edge area weight), shear 1 / (lambda * quad area), bending
1 / (bending coefficient * edge area weight). Stiffer presets therefore
raise all three together, which is what the presets encode.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MaterialParams:
    lame_lambda: float   # shear stiffness (normalized units)
    lame_mu: float       # stretch stiffness
    bending: float       # dihedral stiffness
    density: float = 0.3  # mass per unit area
    friction: float = 0.7

    def __post_init__(self):
        if self.lame_mu <= 0:
            raise ValueError("lame_mu must be positive for a simulable garment")
        for name in ("lame_lambda", "bending", "density", "friction"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


PRESETS = {
    "soft": MaterialParams(lame_lambda=2e3, lame_mu=1e4, bending=40.0),
    "medium": MaterialParams(lame_lambda=2e4, lame_mu=1e5, bending=1500.0),
    "stiff": MaterialParams(lame_lambda=2e5, lame_mu=1e6, bending=45000.0),
}


def material_preset(name: str) -> MaterialParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown material preset {name!r}; "
                         f"expected one of {sorted(PRESETS)}") from None
