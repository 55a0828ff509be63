"""Simulation toolkit for nonlinear and quantum optics in Rydberg-EIT media.

Units used throughout: lengths in micrometres, times in microseconds,
angular frequencies and decay rates in rad/us.  All solver outputs are
deterministic under a fixed seed.
"""

from rydsim.params import MediumParams, DerivedScales, derive_scales, polariton_mixing
from rydsim.errors import ConfigError, GridError, NumericError, ResonanceError

__version__ = "0.1.0"

__all__ = [
    "MediumParams",
    "DerivedScales",
    "derive_scales",
    "polariton_mixing",
    "ConfigError",
    "GridError",
    "NumericError",
    "ResonanceError",
    "__version__",
]
