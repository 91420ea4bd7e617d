from .camera import (
    DEFAULT_AZIMUTHS_PER_RING,
    DEFAULT_DISTANCE,
    DEFAULT_ELEVATIONS,
    DEFAULT_FOV_DEG,
    DEFAULT_RESOLUTION,
    ViewSpec,
    load_rig,
    make_rig,
    save_rig,
)
from .pfm import load_pfm, save_pfm
from .raster import BACKGROUND, DepthMap, rasterize_depth, shade_preview
from .unproject import (
    FeatureMap,
    VertexFeatures,
    default_occlusion_tolerance,
    unproject,
)

__all__ = [
    "ViewSpec", "make_rig", "save_rig", "load_rig",
    "DEFAULT_ELEVATIONS", "DEFAULT_AZIMUTHS_PER_RING", "DEFAULT_FOV_DEG",
    "DEFAULT_DISTANCE", "DEFAULT_RESOLUTION",
    "DepthMap", "rasterize_depth", "shade_preview", "BACKGROUND",
    "FeatureMap", "VertexFeatures", "unproject", "default_occlusion_tolerance",
    "save_pfm", "load_pfm",
]
