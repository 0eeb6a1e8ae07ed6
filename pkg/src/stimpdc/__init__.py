"""Photon-counting statistics of a seeded parametric down-converter feeding a
two-photon interferometer, computed three independent ways."""

from .closed_form import (
    CountStats,
    coefficients_ab,
    coincidence,
    count_stats,
    enhancement_ratio,
    single_counts,
    spontaneous_strength_limit,
    spontaneous_visibility_limit,
    stimulated_strength_asymptote,
    stimulated_visibility_asymptote,
    visibility,
)
from .model import (
    AffineMode,
    BogoliubovPair,
    InterferometerPhase,
    SqueezerParams,
    StimulusParams,
    bogoliubov,
    interferometer_matrix,
    propagate,
    stimulated_modes,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMode",
    "BogoliubovPair",
    "CountStats",
    "InterferometerPhase",
    "SqueezerParams",
    "StimulusParams",
    "bogoliubov",
    "coefficients_ab",
    "coincidence",
    "count_stats",
    "enhancement_ratio",
    "interferometer_matrix",
    "propagate",
    "single_counts",
    "spontaneous_strength_limit",
    "spontaneous_visibility_limit",
    "stimulated_modes",
    "stimulated_strength_asymptote",
    "stimulated_visibility_asymptote",
    "visibility",
]
