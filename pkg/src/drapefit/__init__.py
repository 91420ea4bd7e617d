"""drapefit: automated garment-to-body draping via a parametric proxy body."""

__version__ = "0.1.0"

from . import geom  # noqa: F401
