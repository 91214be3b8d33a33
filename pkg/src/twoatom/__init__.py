"""Photon-mediated coupling of two distant atoms through a lens.

Closed-form series solutions for the delayed single- and two-excitation
dynamics, an independent delay-equation integrator for verification, and
a deterministic CLI for producing figure-class data sets.
"""

__version__ = "0.1.0"

from .errors import NormalizationError, ParameterRangeError, PrecisionLossError
from .model import (
    AmplitudeTrace,
    InitialState,
    LensGeometry,
    SystemParams,
    coupling_K,
    kappa_from_geometry,
)

__all__ = [
    "__version__",
    "AmplitudeTrace",
    "InitialState",
    "LensGeometry",
    "SystemParams",
    "coupling_K",
    "kappa_from_geometry",
    "NormalizationError",
    "ParameterRangeError",
    "PrecisionLossError",
]
