"""Vacuum expectation values of products of affine mode operators.

The product of up to four affine forms is expanded into monomials of the
input operators a0, a0^dag, b0, b0^dag.  Each monomial's vacuum expectation
comes from Wick's theorem with the only non-zero contractions
<a0 a0^dag> = <b0 b0^dag> = 1.  This is deliberately brute force (at most
5^4 monomials) so it stays independent of the closed forms it checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import NumericalInconsistency, UnsupportedOrder
from .model import AffineMode, InterferometerPhase, SqueezerParams, StimulusParams, output_modes

# operator labels, matching AffineMode.operator_coeffs
A, A_DAG, B, B_DAG = 0, 1, 2, 3
MAX_ORDER = 4
IMAG_TOL = 1e-12


@dataclass(frozen=True)
class MomentRequest:
    """Ordered product of affine modes; ``True`` flags take the adjoint."""

    factors: tuple[tuple[AffineMode, bool], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple((m, bool(d)) for m, d in self.factors))
        if len(self.factors) > MAX_ORDER:
            raise UnsupportedOrder(
                f"products of more than {MAX_ORDER} modes are not supported "
                f"(got {len(self.factors)})"
            )

    @classmethod
    def of(cls, *factors: tuple[AffineMode, bool]) -> MomentRequest:
        return cls(tuple(factors))

    def resolved(self) -> list[AffineMode]:
        return [m.dagger() if d else m for m, d in self.factors]


def _contraction(left: int, right: int) -> int:
    if (left, right) in ((A, A_DAG), (B, B_DAG)):
        return 1
    return 0


@lru_cache(maxsize=None)
def word_expectation(word: tuple[int, ...]) -> int:
    """<0|w_1 ... w_n|0> for a word of input operators (integer-valued)."""
    if not word:
        return 1
    if len(word) % 2:
        return 0
    first, rest = word[0], word[1:]
    total = 0
    for j, op in enumerate(rest):
        c = _contraction(first, op)
        if c:
            total += c * word_expectation(rest[:j] + rest[j + 1 :])
    return total


def vacuum_expectation(req: MomentRequest) -> complex:
    """Exact <0|X_1 X_2 ... X_n|0> for the requested product."""
    terms = []
    for mode in req.resolved():
        # (weight, operator label or None for the constant)
        t = [(complex(mode.constant), None)]
        t += [(complex(w), op) for op, w in enumerate(mode.operator_coeffs) if w != 0]
        terms.append(t)
    total = 0j
    for choice in itertools.product(*terms):
        weight = 1 + 0j
        word = []
        for w, op in choice:
            weight *= w
            if op is not None:
                word.append(op)
        if weight == 0:
            continue
        ev = word_expectation(tuple(word))
        if ev:
            total += weight * ev
    return total


def real_part(value: complex, tol: float = IMAG_TOL) -> float:
    """Return Re(value) after checking Im(value) is rounding noise.

    The bound is relative for values above one so that large gains do not
    trip it on ordinary floating-point error.
    """
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > tol * scale:
        raise NumericalInconsistency(
            f"expectation should be real but has imaginary part {value.imag!r}"
        )
    return value.real


def _modes(p, s, psi):
    return output_modes(p, s, psi)


def single_counts_general(
    p: SqueezerParams,
    s: StimulusParams,
    psi: InterferometerPhase | float = 0.0,
    detector: str = "a",
) -> float:
    """<X^dag X> for output X = a3 (``detector="a"``) or b3, any seeds and psi."""
    a3, b3 = _modes(p, s, psi)
    mode = {"a": a3, "b": b3}[detector]
    return real_part(vacuum_expectation(MomentRequest.of((mode, True), (mode, False))))


def coincidence_general(
    p: SqueezerParams, s: StimulusParams, psi: InterferometerPhase | float = 0.0
) -> float:
    """<a3^dag b3^dag b3 a3>."""
    a3, b3 = _modes(p, s, psi)
    req = MomentRequest.of((a3, True), (b3, True), (b3, False), (a3, False))
    return real_part(vacuum_expectation(req))


def number_squared(
    p: SqueezerParams,
    s: StimulusParams,
    psi: InterferometerPhase | float = 0.0,
    detector: str = "a",
) -> float:
    """<(X^dag X)^2> at one detector."""
    a3, b3 = _modes(p, s, psi)
    mode = {"a": a3, "b": b3}[detector]
    req = MomentRequest.of((mode, True), (mode, False), (mode, True), (mode, False))
    return real_part(vacuum_expectation(req))
