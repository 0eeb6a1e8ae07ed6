"""Truncated two-mode Fock-space simulation of the seeded source.

The state S(g, phi) D_a(alpha0) D_b(beta0) |0, 0> is built on a padded
number basis and then projected to the working cutoff.  The squeezer
conserves n_a - n_b and the interferometer conserves n_a + n_b, so both are
exponentiated block by block instead of on the full product space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar

from .errors import EnvelopeExceeded, TruncationFailure
from .model import InterferometerPhase, SqueezerParams, StimulusParams, bogoliubov

MAX_GAIN = 1.2
MAX_MODULUS = 2.0
# fraction of tail_tolerance the analytic bound is allowed to use
_BOUND_SAFETY = 0.1


@dataclass(frozen=True)
class OracleConfig:
    tail_tolerance: float = 1e-10
    # None means cutoff // 4
    evolution_padding: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.tail_tolerance <= 1e-4:
            raise ValueError("tail_tolerance must lie in (0, 1e-4]")
        if self.evolution_padding is not None and self.evolution_padding < 1:
            raise ValueError("evolution_padding must be a positive integer")

    def padding_for(self, cutoff: int) -> int:
        if self.evolution_padding is not None:
            return self.evolution_padding
        return max(1, cutoff // 4)


@dataclass(frozen=True)
class FockState:
    """Amplitudes c[n_a, n_b] for 0 <= n < cutoff."""

    amplitudes: np.ndarray = field(repr=False)
    cutoff: int
    tail_mass: float = 0.0

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.cutoff, self.cutoff):
            raise ValueError(f"amplitudes shape {amps.shape} does not match cutoff {self.cutoff}")
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(self.probabilities.sum())

    def mean_numbers(self) -> tuple[float, float]:
        probs = self.probabilities
        n = np.arange(self.cutoff)
        return float(probs.sum(axis=1) @ n), float(probs.sum(axis=0) @ n)


class Counts(NamedTuple):
    single_a: float
    single_b: float
    coincidence: float


def check_envelope(p: SqueezerParams, s: StimulusParams) -> None:
    if p.gain > MAX_GAIN:
        raise EnvelopeExceeded(f"gain {p.gain} exceeds the Fock oracle limit {MAX_GAIN}")
    if s.alpha_modulus > MAX_MODULUS or s.beta_modulus > MAX_MODULUS:
        raise EnvelopeExceeded(
            f"seed moduli ({s.alpha_modulus}, {s.beta_modulus}) exceed the "
            f"Fock oracle limit {MAX_MODULUS}"
        )


def _log_tail_bound(n_th: float, disp_sq: float, n: int) -> float:
    """Chernoff bound on log P(N >= n) for a displaced thermal state.

    The photon-number generating function of a thermal state with mean
    ``n_th`` displaced by ``|d|^2`` is

        E[t^N] = exp(|d|^2 (t-1) / (1 - n_th (t-1))) / (1 - n_th (t-1)),

    a thermal factor times a Poisson-like factor, finite for
    1 < t < 1 + 1/n_th.
    """
    u_max = math.log1p(1.0 / n_th) if n_th > 0 else 60.0
    u_max = min(u_max, 60.0)

    def objective(u: float) -> float:
        tm1 = math.expm1(u)
        den = 1.0 - n_th * tm1
        if den <= 0.0:
            return math.inf
        return -math.log(den) + disp_sq * tm1 / den - n * u

    res = minimize_scalar(objective, bounds=(0.0, u_max * (1.0 - 1e-9)), method="bounded")
    return min(float(res.fun), 0.0)


def choose_cutoff(
    p: SqueezerParams, s: StimulusParams, cfg: OracleConfig | None = None
) -> int:
    """Smallest per-mode cutoff whose analytic photon-number tail is negligible.

    Each output arm is a displaced thermal state with mean sinh^2 g and
    displacement |mu alpha0 + nu beta0*|^2 (and the mirror for b).  The
    cutoff covers the mean plus ten standard deviations and, in addition,
    keeps the Chernoff tail bound of both arms below the tolerance.
    """
    cfg = cfg or OracleConfig()
    check_envelope(p, s)
    bp = bogoliubov(p)
    n_th = math.sinh(p.gain) ** 2
    disps = (
        abs(bp.mu * s.alpha + bp.nu * s.beta.conjugate()) ** 2,
        abs(bp.mu * s.beta + bp.nu * s.alpha.conjugate()) ** 2,
    )
    cutoff = 2
    for d2 in disps:
        mean = n_th + d2
        std = math.sqrt(n_th * (n_th + 1.0) + d2 * (2.0 * n_th + 1.0))
        cutoff = max(cutoff, math.ceil(mean + 10.0 * std))
    log_budget = math.log(_BOUND_SAFETY * cfg.tail_tolerance / 2.0)
    while max(_log_tail_bound(n_th, d2, cutoff) for d2 in disps) > log_budget:
        cutoff += 1
    return cutoff


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """<n|alpha> for n < dim, by the stable recurrence c_n = c_{n-1} alpha / sqrt(n)."""
    out = np.empty(dim, dtype=complex)
    out[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def hermitian_expm(herm: np.ndarray, t: float) -> np.ndarray:
    """exp(i t H) for Hermitian H via its eigendecomposition (unitary to rounding)."""
    vals, vecs = eigh(herm)
    return (vecs * np.exp(1j * t * vals)) @ vecs.conj().T


@lru_cache(maxsize=512)
def _squeezer_block(gain: float, pump_phase: float, shift: int, size: int) -> np.ndarray:
    """exp(g (e^{i phi} a^dag b^dag - e^{-i phi} a b)) on the n_a - n_b = +-shift block.

    Basis element j is |j + shift, j> (or its mirror), for j < size.
    """
    j = np.arange(size - 1)
    w = np.sqrt((j + shift + 1.0) * (j + 1.0))
    # i * generator is Hermitian, so exp(g G) = exp(-i g H)
    herm = np.zeros((size, size), dtype=complex)
    herm[j + 1, j] = 1j * np.exp(1j * pump_phase) * w
    herm[j, j + 1] = -1j * np.exp(-1j * pump_phase) * w
    out = hermitian_expm(herm, -gain)
    out.setflags(write=False)
    return out


def _apply_squeezer(psi: np.ndarray, gain: float, pump_phase: float) -> np.ndarray:
    dim = psi.shape[0]
    out = np.zeros_like(psi)
    if gain == 0.0:
        return psi.copy()
    for k in range(-(dim - 1), dim):
        size = dim - abs(k)
        j = np.arange(size)
        na, nb = (j + k, j) if k >= 0 else (j, j - k)
        block = _squeezer_block(gain, pump_phase, abs(k), size)
        out[na, nb] = block @ psi[na, nb]
    return out


def build_state(
    p: SqueezerParams,
    s: StimulusParams,
    cfg: OracleConfig | None = None,
    cutoff: int | None = None,
) -> FockState:
    """Seeded squeezed vacuum in a truncated number basis.

    ``cutoff`` overrides the automatic choice (used for convergence checks).
    The amplitudes are not renormalized after projection; the lost weight is
    reported as ``tail_mass``.
    """
    cfg = cfg or OracleConfig()
    check_envelope(p, s)
    if cutoff is None:
        cutoff = choose_cutoff(p, s, cfg)
    elif cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    dim = cutoff + cfg.padding_for(cutoff)

    psi = np.outer(coherent_amplitudes(s.alpha, dim), coherent_amplitudes(s.beta, dim))
    psi = _apply_squeezer(psi, p.gain, p.pump_phase)
    kept = psi[:cutoff, :cutoff]
    tail = max(0.0, 1.0 - float(np.sum(np.abs(kept) ** 2)))
    if tail > cfg.tail_tolerance:
        raise TruncationFailure(
            f"tail mass {tail:.3e} exceeds tolerance {cfg.tail_tolerance:.1e} at cutoff {cutoff}"
        )
    return FockState(kept, cutoff, tail)


@lru_cache(maxsize=1024)
def _splitter_shell(total: int) -> np.ndarray:
    """exp(i pi/4 (a^dag b + b^dag a)) on the shell n_a + n_b = total.

    Basis element k is |k, total - k>.  In the Heisenberg picture this maps
    a -> (a + i b)/sqrt(2), b -> (i a + b)/sqrt(2).
    """
    k = np.arange(total)
    w = np.sqrt((k + 1.0) * (total - k))
    gen = np.zeros((total + 1, total + 1))
    gen[k + 1, k] = w
    gen[k, k + 1] = w
    out = hermitian_expm(gen, math.pi / 4.0)
    out.setflags(write=False)
    return out


def _apply_splitter(psi: np.ndarray) -> np.ndarray:
    dim = psi.shape[0]
    out = np.zeros_like(psi)
    for total in range(dim):
        na = np.arange(total + 1)
        nb = total - na
        out[na, nb] = _splitter_shell(total) @ psi[na, nb]
    return out


def interfere(state: FockState, psi: InterferometerPhase | float) -> FockState:
    """Propagate through splitter, phase exp(i psi n_b), splitter.

    The state is first embedded in a box of size 2*cutoff - 1 so that every
    number shell it touches is complete and the propagation is exact.
    """
    psi = psi.psi if isinstance(psi, InterferometerPhase) else float(psi)
    n = state.cutoff
    dim = 2 * n - 1
    amps = np.zeros((dim, dim), dtype=complex)
    amps[:n, :n] = state.amplitudes
    amps = _apply_splitter(amps)
    amps = amps * np.exp(1j * psi * np.arange(dim))[np.newaxis, :]
    amps = _apply_splitter(amps)
    return FockState(amps, dim, state.tail_mass)


def measure(state: FockState, psi: InterferometerPhase | float = 0.0) -> Counts:
    """<n_a>, <n_b> and <n_a n_b> behind the interferometer.

    For distinct modes <a^dag b^dag b a> = <n_a n_b>.
    """
    out = interfere(state, psi)
    probs = out.probabilities
    n = np.arange(out.cutoff, dtype=float)
    return Counts(
        single_a=float(probs.sum(axis=1) @ n),
        single_b=float(probs.sum(axis=0) @ n),
        coincidence=float(n @ probs @ n),
    )
