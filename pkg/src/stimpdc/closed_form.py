"""Printed analytic results for the stimulated two-photon interferometer.

All functions assume symmetric seeding (alpha0 == beta0) where the seed
enters, and raise ``SymmetryRequired`` otherwise.  With ``x = |alpha0|^2``,
``s = sinh g`` and ``Delta = phi - 2 theta``:

    bracket = 1 + 2 s^2 + sinh(2g) cos(Delta)
    singles = s^2 + x * bracket                               (psi = 0 only)
    A = s^4 + 2 x s^2 bracket
    B = 1/2 [(1 + s^2) s^2 + x sinh(2g) (sinh(2g) + (1 + 2 s^2) cos(Delta))
             + x^2 bracket^2]
    coincidence(psi) = A + B (1 + cos 2 psi),   V = B / (A + B)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateStatistics, RangeExceeded, SymmetryRequired
from .model import InterferometerPhase, SqueezerParams, StimulusParams

MAX_GAIN = 12.0


@dataclass(frozen=True)
class CountStats:
    single_a: float
    coincidence: float
    coeff_A: float
    coeff_B: float
    visibility: float
    delta: float


def _check_gain(p: SqueezerParams) -> None:
    if p.gain > MAX_GAIN:
        raise RangeExceeded(f"gain {p.gain} exceeds closed-form limit {MAX_GAIN}")


def _seed(p: SqueezerParams, s: StimulusParams) -> tuple[float, float]:
    """Return (|alpha0|^2, Delta) after validating the inputs."""
    _check_gain(p)
    if not s.is_symmetric:
        raise SymmetryRequired(
            "closed forms assume alpha0 == beta0; use the moment engine for "
            f"alpha0={s.alpha!r}, beta0={s.beta!r}"
        )
    return s.alpha_modulus**2, relative_phase(p, s)


def relative_phase(p: SqueezerParams, s: StimulusParams) -> float:
    """Delta = phi - 2 theta, the pump/seed phase difference."""
    return p.pump_phase - 2.0 * s.alpha_phase


def _psi(psi: InterferometerPhase | float) -> float:
    return psi.psi if isinstance(psi, InterferometerPhase) else float(psi)


def _bracket(g: float, delta: float) -> float:
    sh = math.sinh(g)
    return 1.0 + 2.0 * sh * sh + math.sinh(2.0 * g) * math.cos(delta)


def single_counts(p: SqueezerParams, s: StimulusParams) -> float:
    """Mean count at detector a with the object removed (psi = 0).

    The printed formula only covers psi = 0; other interferometer phases
    go through :func:`stimpdc.moments.single_counts_general`.
    """
    x, delta = _seed(p, s)
    sh2 = math.sinh(p.gain) ** 2
    return sh2 + x * _bracket(p.gain, delta)


def coefficients_ab(p: SqueezerParams, s: StimulusParams) -> tuple[float, float]:
    x, delta = _seed(p, s)
    g = p.gain
    sh2 = math.sinh(g) ** 2
    sh2g = math.sinh(2.0 * g)
    br = _bracket(g, delta)
    a = sh2 * sh2 + 2.0 * x * sh2 * br
    b = 0.5 * (
        (1.0 + sh2) * sh2
        + x * sh2g * (sh2g + (1.0 + 2.0 * sh2) * math.cos(delta))
        + x * x * br * br
    )
    return a, b


def visibility(p: SqueezerParams, s: StimulusParams) -> float:
    a, b = coefficients_ab(p, s)
    if a + b == 0.0:
        raise DegenerateStatistics("no photons reach the detectors; visibility undefined")
    return b / (a + b)


def coincidence(
    p: SqueezerParams, s: StimulusParams, psi: InterferometerPhase | float = 0.0
) -> float:
    # A + B(1 + cos 2psi) sidesteps the V = 1 singularity of the A{1 + V/(1-V)...} form
    a, b = coefficients_ab(p, s)
    return a + b * (1.0 + math.cos(2.0 * _psi(psi)))


def count_stats(
    p: SqueezerParams, s: StimulusParams, psi: InterferometerPhase | float = 0.0
) -> CountStats:
    a, b = coefficients_ab(p, s)
    if a + b == 0.0:
        raise DegenerateStatistics("no photons reach the detectors; visibility undefined")
    return CountStats(
        single_a=single_counts(p, s),
        coincidence=a + b * (1.0 + math.cos(2.0 * _psi(psi))),
        coeff_A=a,
        coeff_B=b,
        visibility=b / (a + b),
        delta=relative_phase(p, s),
    )


def spontaneous_visibility_limit(p: SqueezerParams) -> float:
    _check_gain(p)
    sh2 = math.sinh(p.gain) ** 2
    return (1.0 + sh2) / (1.0 + 3.0 * sh2)


def spontaneous_strength_limit(p: SqueezerParams) -> float:
    """Unseeded coincidence at psi = 0: 2 sinh^4 g + sinh^2 g."""
    _check_gain(p)
    sh2 = math.sinh(p.gain) ** 2
    return 2.0 * sh2 * sh2 + sh2


def stimulated_visibility_asymptote(alpha_sq: float, delta: float) -> float:
    """Large-gain visibility; the gain itself drops out."""
    if alpha_sq < 0.0:
        raise ValueError("alpha_sq must be nonnegative")
    x = alpha_sq * (1.0 + math.cos(delta))
    return (0.25 + x + x * x) / (0.75 + 3.0 * x + x * x)


def stimulated_strength_asymptote(p: SqueezerParams, alpha_sq: float, delta: float) -> float:
    """Large-gain coincidence strength at psi = 0."""
    _check_gain(p)
    if alpha_sq < 0.0:
        raise ValueError("alpha_sq must be nonnegative")
    x = alpha_sq * (1.0 + math.cos(delta))
    sh4 = math.sinh(p.gain) ** 4
    return 2.0 * sh4 * (1.0 + 4.0 * x + 2.0 * x * x)


def enhancement_ratio(p: SqueezerParams, s: StimulusParams) -> float:
    """Seeded over unseeded coincidence rate, both at psi = 0."""
    stimulated = coincidence(p, s, 0.0)
    spontaneous = spontaneous_strength_limit(p)
    if spontaneous == 0.0:
        raise DegenerateStatistics("spontaneous coincidence vanishes at zero gain")
    return stimulated / spontaneous
