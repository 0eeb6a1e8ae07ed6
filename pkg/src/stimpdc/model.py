"""Parameters and Heisenberg-picture operator algebra of the stimulated source.

Output modes are kept as affine forms over the two vacuum input modes,

    X = c + x_a a0 + x_ad a0^dag + x_b b0 + x_bd b0^dag,

so that every downstream observable is a vacuum expectation of a product
of such forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# 50/50 beam splitter, fixed convention
BEAM_SPLITTER = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / math.sqrt(2.0)


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SqueezerParams:
    """Gain ``g`` and pump phase ``phi`` (raw radians) of the down-converter."""

    gain: float
    pump_phase: float = 0.0

    def __post_init__(self) -> None:
        gain = _finite("gain", self.gain)
        if gain < 0.0:
            raise ValueError(f"gain must be nonnegative, got {gain}")
        object.__setattr__(self, "gain", gain)
        object.__setattr__(self, "pump_phase", _finite("pump_phase", self.pump_phase))

    @property
    def display_phase(self) -> float:
        return self.pump_phase % TWO_PI


@dataclass(frozen=True)
class StimulusParams:
    """Complex seed amplitudes alpha0 (signal) and beta0 (idler) in polar form."""

    alpha_modulus: float = 0.0
    alpha_phase: float = 0.0
    beta_modulus: float = 0.0
    beta_phase: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha_modulus", "alpha_phase", "beta_modulus", "beta_phase"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.alpha_modulus < 0.0 or self.beta_modulus < 0.0:
            raise ValueError("stimulus moduli must be nonnegative")

    @classmethod
    def symmetric(cls, modulus: float, phase: float = 0.0) -> StimulusParams:
        """Equal seeds on both arms, alpha0 = beta0 = modulus * exp(i phase)."""
        return cls(modulus, phase, modulus, phase)

    @classmethod
    def vacuum(cls) -> StimulusParams:
        return cls()

    @classmethod
    def from_complex(cls, alpha: complex, beta: complex) -> StimulusParams:
        return cls(abs(alpha), cmath.phase(alpha), abs(beta), cmath.phase(beta))

    @property
    def alpha(self) -> complex:
        return cmath.rect(self.alpha_modulus, self.alpha_phase)

    @property
    def beta(self) -> complex:
        return cmath.rect(self.beta_modulus, self.beta_phase)

    @property
    def is_symmetric(self) -> bool:
        return cmath.isclose(self.alpha, self.beta, rel_tol=1e-12, abs_tol=1e-15)


@dataclass(frozen=True)
class InterferometerPhase:
    psi: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "psi", _finite("psi", self.psi))


@dataclass(frozen=True)
class BogoliubovPair:
    mu: complex
    nu: complex

    def unitarity_defect(self) -> float:
        """|mu|^2 - |nu|^2 - 1, which vanishes for a valid transform."""
        return abs(self.mu) ** 2 - abs(self.nu) ** 2 - 1.0


@dataclass(frozen=True)
class AffineMode:
    """Constant plus a linear combination of a0, a0^dag, b0, b0^dag."""

    constant: complex = 0j
    coeff_a: complex = 0j
    coeff_a_dag: complex = 0j
    coeff_b: complex = 0j
    coeff_b_dag: complex = 0j

    @classmethod
    def vacuum_a(cls) -> AffineMode:
        return cls(coeff_a=1.0)

    @classmethod
    def vacuum_b(cls) -> AffineMode:
        return cls(coeff_b=1.0)

    @property
    def operator_coeffs(self) -> tuple[complex, complex, complex, complex]:
        """Weights of (a0, a0^dag, b0, b0^dag), in that order."""
        return (self.coeff_a, self.coeff_a_dag, self.coeff_b, self.coeff_b_dag)

    def dagger(self) -> AffineMode:
        c = complex.conjugate
        return AffineMode(
            constant=c(complex(self.constant)),
            coeff_a=c(complex(self.coeff_a_dag)),
            coeff_a_dag=c(complex(self.coeff_a)),
            coeff_b=c(complex(self.coeff_b_dag)),
            coeff_b_dag=c(complex(self.coeff_b)),
        )

    def commutator(self, other: AffineMode) -> complex:
        """The c-number [self, other], using [a0, a0^dag] = [b0, b0^dag] = 1."""
        return (
            self.coeff_a * other.coeff_a_dag
            - self.coeff_a_dag * other.coeff_a
            + self.coeff_b * other.coeff_b_dag
            - self.coeff_b_dag * other.coeff_b
        )

    def __add__(self, other: AffineMode) -> AffineMode:
        if not isinstance(other, AffineMode):
            return NotImplemented
        return AffineMode(
            self.constant + other.constant,
            self.coeff_a + other.coeff_a,
            self.coeff_a_dag + other.coeff_a_dag,
            self.coeff_b + other.coeff_b,
            self.coeff_b_dag + other.coeff_b_dag,
        )

    def __mul__(self, scalar: complex) -> AffineMode:
        if isinstance(scalar, AffineMode):
            return NotImplemented
        return AffineMode(
            scalar * self.constant,
            scalar * self.coeff_a,
            scalar * self.coeff_a_dag,
            scalar * self.coeff_b,
            scalar * self.coeff_b_dag,
        )

    __rmul__ = __mul__


def bogoliubov(p: SqueezerParams) -> BogoliubovPair:
    """mu = cosh g (real), nu = exp(i phi) sinh g."""
    return BogoliubovPair(
        mu=complex(math.cosh(p.gain)),
        nu=cmath.rect(math.sinh(p.gain), p.pump_phase),
    )


def stimulated_modes(p: SqueezerParams, s: StimulusParams) -> tuple[AffineMode, AffineMode]:
    """Down-converter outputs (a1, b1) for seeded vacuum inputs.

    a1 = mu (a0 + alpha0) + nu (b0^dag + beta0*)
    b1 = mu (b0 + beta0) + nu (a0^dag + alpha0*)
    """
    bp = bogoliubov(p)
    mu, nu = bp.mu, bp.nu
    alpha, beta = s.alpha, s.beta
    a1 = AffineMode(
        constant=mu * alpha + nu * beta.conjugate(),
        coeff_a=mu,
        coeff_b_dag=nu,
    )
    b1 = AffineMode(
        constant=mu * beta + nu * alpha.conjugate(),
        coeff_b=mu,
        coeff_a_dag=nu,
    )
    return a1, b1


def phase_shifter(psi: float) -> np.ndarray:
    return np.diag([1.0, cmath.exp(1j * psi)])


def interferometer_matrix(psi: InterferometerPhase | float) -> np.ndarray:
    """Splitter, phase on the b arm, splitter: the 2x2 mode transfer matrix."""
    psi = psi.psi if isinstance(psi, InterferometerPhase) else float(psi)
    return BEAM_SPLITTER @ phase_shifter(psi) @ BEAM_SPLITTER


def apply_matrix(
    matrix: np.ndarray, modes: tuple[AffineMode, AffineMode]
) -> tuple[AffineMode, AffineMode]:
    first, second = modes
    out = []
    for row in matrix:
        out.append(complex(row[0]) * first + complex(row[1]) * second)
    return out[0], out[1]


def propagate(
    modes: tuple[AffineMode, AffineMode], psi: InterferometerPhase | float
) -> tuple[AffineMode, AffineMode]:
    """Send (a1, b1) through the interferometer and return (a3, b3)."""
    return apply_matrix(interferometer_matrix(psi), modes)


def output_modes(
    p: SqueezerParams, s: StimulusParams, psi: InterferometerPhase | float = 0.0
) -> tuple[AffineMode, AffineMode]:
    return propagate(stimulated_modes(p, s), psi)
