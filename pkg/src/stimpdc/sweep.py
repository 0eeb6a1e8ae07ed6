"""Parameter sweeps behind the command-line tool.

Every figure-style sweep seeds both arms with the same amplitude
|alpha0| e^{i theta}.  Unless a modulus is given explicitly it follows the
equal-contribution rule: the coherent-only coincidence at psi = 0
(|alpha0|^4) equals the unseeded one (2 sinh^4 g + sinh^2 g).
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import closed_form as cf
from . import fock, moments
from .errors import DegenerateStatistics, VerificationFailure
from .model import SqueezerParams, StimulusParams

ENGINES = ("closed", "moment", "fock")
QUANTITIES = ("fringe", "visibility_vs_gain", "enhancement_vs_gain", "singles")

TOL_CLOSED_MOMENT = 1e-10
TOL_FOCK = 1e-6
# deviations are relative to max(|reference|, SCALE_FLOOR)
SCALE_FLOOR = 1e-3
EXTRACTION_TOL = 1e-9

EQUAL_CONTRIBUTION_RULE = (
    "equal_contribution: |alpha0|^4 = 2 sinh^4 g + sinh^2 g "
    "(coherent-only and spontaneous-only coincidences equal at psi=0)"
)
NORMALIZATION_RULE = "unseeded closed-form coincidence at psi=0"


def equal_contribution_alpha(p: SqueezerParams) -> float:
    """Seed modulus at which coherent and spontaneous coincidences match."""
    if p.gain == 0.0:
        raise DegenerateStatistics("equal-contribution seed is undefined at zero gain")
    return cf.spontaneous_strength_limit(p) ** 0.25


def linear_grid(start: float, stop: float, steps: int) -> np.ndarray:
    if steps == 1:
        if start != stop:
            raise ValueError("a single-step range needs start == stop")
        return np.array([float(start)])
    if steps < 2:
        raise ValueError("a swept axis needs at least 2 steps")
    return np.linspace(start, stop, steps)


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    gain_range: tuple[float, float, int]
    psi_range: tuple[float, float, int] = (0.0, 2.0 * math.pi, 721)
    thetas: tuple[float, ...] = (0.0, math.pi / 4.0, math.pi / 2.0)
    # None selects the equal-contribution rule
    alpha: float | None = None
    pump_phase: float = math.pi
    engines: tuple[str, ...] = ("closed",)
    normalize: bool = True
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if not self.engines:
            raise ValueError("at least one engine is required")
        bad = set(self.engines) - set(ENGINES)
        if bad:
            raise ValueError(f"unknown engines: {sorted(bad)}")
        if self.alpha is not None and self.alpha < 0:
            raise ValueError("alpha modulus must be nonnegative")
        # force validation of both axes up front
        self.gains
        self.psis

    @property
    def gains(self) -> np.ndarray:
        return linear_grid(*self.gain_range)

    @property
    def psis(self) -> np.ndarray:
        return linear_grid(*self.psi_range)

    def stimulus(self, p: SqueezerParams, theta: float) -> StimulusParams:
        modulus = equal_contribution_alpha(p) if self.alpha is None else self.alpha
        return StimulusParams.symmetric(modulus, theta)

    def points(self) -> list[tuple[SqueezerParams, float, StimulusParams]]:
        out = []
        for g in self.gains:
            p = SqueezerParams(float(g), self.pump_phase)
            for theta in self.thetas:
                out.append((p, theta, self.stimulus(p, theta)))
        return out

    def check_envelope(self) -> None:
        """Raise EnvelopeExceeded before any work if the Fock engine cannot cover the grid."""
        if "fock" not in self.engines:
            return
        for p, _, s in self.points():
            fock.check_envelope(p, s)


@dataclass(frozen=True)
class FringeRecord:
    gain: float
    theta: float
    alpha: float
    psi: float
    values: dict[str, float]
    spontaneous: float
    normalization: float


@dataclass
class Table:
    """Rows of a sweep result plus provenance for the CSV header."""

    columns: list[str]
    rows: list[list[float | None]]
    meta: dict[str, str] = field(default_factory=dict)

    def column(self, name: str) -> list[float | None]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    """Map in grid order, optionally across worker processes."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def relative_deviation(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), SCALE_FLOOR)


def cross_check(values: dict[str, float], where: str = "") -> None:
    """Raise VerificationFailure if engines disagree beyond their tolerances."""
    if "closed" in values and "moment" in values:
        dev = relative_deviation(values["moment"], values["closed"])
        if dev > TOL_CLOSED_MOMENT:
            raise VerificationFailure(f"closed/moment mismatch {dev:.3e} {where}")
    if "fock" in values:
        for other in ("closed", "moment"):
            if other in values:
                dev = relative_deviation(values["fock"], values[other])
                if dev > TOL_FOCK:
                    raise VerificationFailure(f"{other}/fock mismatch {dev:.3e} {where}")


def extract_visibility(samples: Iterable[float]) -> float:
    """(max - min) / (max + min) of a sampled fringe."""
    arr = np.asarray(list(samples), dtype=float)
    hi, lo = float(arr.max()), float(arr.min())
    if hi + lo == 0.0:
        raise DegenerateStatistics("flat zero fringe has no visibility")
    return (hi - lo) / (hi + lo)


def coincidence_scan(
    engine: str, p: SqueezerParams, s: StimulusParams, psis: Iterable[float]
) -> list[float]:
    psis = [float(x) for x in psis]
    if engine == "closed":
        a, b = cf.coefficients_ab(p, s)
        return [a + b * (1.0 + math.cos(2.0 * x)) for x in psis]
    if engine == "moment":
        return [moments.coincidence_general(p, s, x) for x in psis]
    if engine == "fock":
        state = fock.build_state(p, s)
        return [fock.measure(state, x).coincidence for x in psis]
    raise ValueError(f"unknown engine {engine!r}")


def _fringe_point(spec: SweepSpec, point) -> list[FringeRecord]:
    p, theta, s = point
    psis = spec.psis
    spont = coincidence_scan("closed", p, StimulusParams.vacuum(), psis)
    norm = 1.0
    if spec.normalize:
        norm = cf.coincidence(p, StimulusParams.vacuum(), 0.0)
        if norm == 0.0:
            raise DegenerateStatistics("cannot normalize by a vanishing spontaneous rate (g=0)")
    scans = {e: coincidence_scan(e, p, s, psis) for e in spec.engines}
    out = []
    for i, psi in enumerate(psis):
        raw = {e: scans[e][i] for e in spec.engines}
        cross_check(raw, f"at g={p.gain}, theta={theta}, psi={psi}")
        out.append(
            FringeRecord(
                gain=p.gain,
                theta=theta,
                alpha=s.alpha_modulus,
                psi=float(psi),
                values={e: v / norm for e, v in raw.items()},
                spontaneous=spont[i] / norm,
                normalization=norm,
            )
        )
    return out


def run_fringe(spec: SweepSpec) -> list[FringeRecord]:
    """Coincidence fringe against psi for every (gain, theta) in the grid."""
    spec.check_envelope()
    chunks = _pmap(partial(_fringe_point, spec), spec.points(), spec.jobs)
    return [rec for chunk in chunks for rec in chunk]


def fringe_table(spec: SweepSpec, records: list[FringeRecord]) -> Table:
    columns = ["gain", "theta", "alpha", "psi", *spec.engines, "spontaneous", "normalization"]
    rows = [
        [r.gain, r.theta, r.alpha, r.psi, *(r.values[e] for e in spec.engines),
         r.spontaneous, r.normalization]
        for r in records
    ]
    return Table(columns, rows, metadata(spec))


def _visibility_point(spec: SweepSpec, point) -> list:
    p, theta, s = point
    v_formula = cf.visibility(p, s)
    row = [p.gain, theta, s.alpha_modulus, v_formula]
    for e in spec.engines:
        v = extract_visibility(coincidence_scan(e, p, s, spec.psis))
        tol = TOL_FOCK if e == "fock" else EXTRACTION_TOL
        if abs(v - v_formula) > tol:
            raise VerificationFailure(
                f"{e} fringe visibility {v!r} differs from B/(A+B) {v_formula!r} "
                f"at g={p.gain}, theta={theta}"
            )
        row.append(v)
    row.append(cf.spontaneous_visibility_limit(p))
    return row


def run_visibility(spec: SweepSpec) -> Table:
    """Visibility against gain per theta, with the unseeded reference curve."""
    spec.check_envelope()
    rows = _pmap(partial(_visibility_point, spec), spec.points(), spec.jobs)
    columns = ["gain", "theta", "alpha", "visibility",
               *(f"extracted_{e}" for e in spec.engines), "spontaneous_reference"]
    return Table(columns, rows, metadata(spec))


def _enhancement_point(spec: SweepSpec, point) -> list:
    p, theta, s = point
    vac = StimulusParams.vacuum()
    row = [p.gain, theta, s.alpha_modulus]
    values = {}
    for e in spec.engines:
        seeded = coincidence_scan(e, p, s, [0.0])[0]
        bare = coincidence_scan(e, p, vac, [0.0])[0]
        if bare == 0.0:
            raise DegenerateStatistics("spontaneous coincidence vanishes at zero gain")
        values[e] = seeded / bare
    cross_check(values, f"at g={p.gain}, theta={theta}")
    row.extend(values[e] for e in spec.engines)
    return row


def run_enhancement(spec: SweepSpec) -> Table:
    """Seeded-to-unseeded coincidence ratio at psi = 0 against gain."""
    spec.check_envelope()
    rows = _pmap(partial(_enhancement_point, spec), spec.points(), spec.jobs)
    columns = ["gain", "theta", "alpha", *(f"ratio_{e}" for e in spec.engines)]
    return Table(columns, rows, metadata(spec))


def _singles_point(spec: SweepSpec, point) -> list[list]:
    p, theta, s = point
    psis = spec.psis
    state = fock.build_state(p, s) if "fock" in spec.engines else None
    rows = []
    for psi in psis:
        psi = float(psi)
        row = [p.gain, theta, s.alpha_modulus, psi]
        for e in spec.engines:
            if e == "closed":
                # the closed form exists only without the object
                row += [cf.single_counts(p, s) if psi == 0.0 else None, None]
            elif e == "moment":
                row += [moments.single_counts_general(p, s, psi, "a"),
                        moments.single_counts_general(p, s, psi, "b")]
            else:
                counts = fock.measure(state, psi)
                row += [counts.single_a, counts.single_b]
        rows.append(row)
    return rows


def run_singles(spec: SweepSpec) -> Table:
    """Mean counts at both detectors against psi."""
    spec.check_envelope()
    chunks = _pmap(partial(_singles_point, spec), spec.points(), spec.jobs)
    columns = ["gain", "theta", "alpha", "psi"]
    for e in spec.engines:
        columns += [f"{e}_a", f"{e}_b"]
    return Table(columns, [r for chunk in chunks for r in chunk], metadata(spec))


def run(spec: SweepSpec) -> Table:
    if spec.quantity == "fringe":
        return fringe_table(spec, run_fringe(spec))
    if spec.quantity == "visibility_vs_gain":
        return run_visibility(spec)
    if spec.quantity == "enhancement_vs_gain":
        return run_enhancement(spec)
    return run_singles(spec)


# -- cross-engine certification -------------------------------------------

@dataclass(frozen=True)
class VerifyGrid:
    gains: tuple[float, ...] = (0.0, 0.2, 0.5, 0.8)
    alphas: tuple[float, ...] = (0.0, 0.5, 1.0)
    deltas: tuple[float, ...] = (0.0, math.pi / 2.0, math.pi)
    psis: tuple[float, ...] = (0.0, 0.3, math.pi / 2.0, 2.1)
    # seed phase; the pump phase is set to delta + 2 theta
    theta: float = 0.25
    random_points: int = 1000
    seed: int = 20240601
    random_gain_max: float = 3.0
    random_alpha_max: float = 3.0
    tol_closed_moment: float = TOL_CLOSED_MOMENT
    tol_fock: float = TOL_FOCK
    engines: tuple[str, ...] = ENGINES
    jobs: int = 1

    def fock_points(self) -> list[tuple[SqueezerParams, StimulusParams]]:
        out = []
        for g in self.gains:
            for a in self.alphas:
                for d in self.deltas:
                    out.append((SqueezerParams(g, d + 2.0 * self.theta),
                                StimulusParams.symmetric(a, self.theta)))
        return out

    def random_points_list(self) -> list[tuple[SqueezerParams, StimulusParams, float]]:
        rng = np.random.default_rng(self.seed)
        out = []
        for _ in range(self.random_points):
            g, a = rng.uniform(0.0, self.random_gain_max), rng.uniform(0.0, self.random_alpha_max)
            phi, theta, psi = rng.uniform(0.0, 2.0 * math.pi, size=3)
            out.append((SqueezerParams(g, phi), StimulusParams.symmetric(a, theta), float(psi)))
        return out


@dataclass(frozen=True)
class VerifyPoint:
    kind: str
    gain: float
    pump_phase: float
    theta: float
    alpha: float
    psi: float
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


@dataclass
class VerifyReport:
    points: list[VerifyPoint]

    @property
    def passed(self) -> bool:
        return all(pt.passed for pt in self.points)

    @property
    def failures(self) -> list[VerifyPoint]:
        return [pt for pt in self.points if not pt.passed]

    def table(self) -> Table:
        columns = ["kind", "gain", "pump_phase", "theta", "alpha", "psi",
                   "max_deviation", "tolerance", "status"]
        rows = [
            [pt.kind, pt.gain, pt.pump_phase, pt.theta, pt.alpha, pt.psi,
             pt.max_deviation, pt.tolerance, "PASS" if pt.passed else "FAIL"]
            for pt in self.points
        ]
        return Table(columns, rows)


def _closed_vs_moment(tol: float, point) -> VerifyPoint:
    p, s, psi = point
    devs = [
        relative_deviation(moments.coincidence_general(p, s, psi), cf.coincidence(p, s, psi)),
        relative_deviation(moments.single_counts_general(p, s, 0.0), cf.single_counts(p, s)),
    ]
    return VerifyPoint("closed-moment", p.gain, p.pump_phase, s.alpha_phase,
                       s.alpha_modulus, psi, max(devs), tol)


def _against_fock(grid: VerifyGrid, point) -> list[VerifyPoint]:
    p, s = point
    state = fock.build_state(p, s)
    out = []
    for psi in grid.psis:
        counts = fock.measure(state, psi)
        devs = []
        if "closed" in grid.engines:
            devs.append(relative_deviation(counts.coincidence, cf.coincidence(p, s, psi)))
            if psi == 0.0:
                devs.append(relative_deviation(counts.single_a, cf.single_counts(p, s)))
        if "moment" in grid.engines:
            devs += [
                relative_deviation(counts.single_a, moments.single_counts_general(p, s, psi, "a")),
                relative_deviation(counts.single_b, moments.single_counts_general(p, s, psi, "b")),
                relative_deviation(counts.coincidence, moments.coincidence_general(p, s, psi)),
            ]
        out.append(VerifyPoint("fock", p.gain, p.pump_phase, s.alpha_phase,
                               s.alpha_modulus, float(psi), max(devs, default=0.0),
                               grid.tol_fock))
    return out


def verify(grid: VerifyGrid | None = None) -> VerifyReport:
    """Certify the three engines against each other.

    Closed forms and the moment engine are compared on random symmetric
    points; the Fock oracle is compared with both on the envelope grid.
    """
    grid = grid or VerifyGrid()
    fock_points = grid.fock_points() if "fock" in grid.engines else []
    for p, s in fock_points:
        fock.check_envelope(p, s)
    points: list[VerifyPoint] = []
    if "closed" in grid.engines and "moment" in grid.engines:
        points += _pmap(partial(_closed_vs_moment, grid.tol_closed_moment),
                        grid.random_points_list(), grid.jobs)
    for chunk in _pmap(partial(_against_fock, grid), fock_points, grid.jobs):
        points += chunk
    return VerifyReport(points)


# -- CSV -------------------------------------------------------------------

def metadata(spec: SweepSpec) -> dict[str, str]:
    from . import __version__

    g0, g1, gn = spec.gain_range
    p0, p1, pn = spec.psi_range
    return {
        "generator": f"stimpdc {__version__}",
        "quantity": spec.quantity,
        "gain_range": f"{fmt(g0)}:{fmt(g1)}:{gn}",
        "psi_range": f"{fmt(p0)}:{fmt(p1)}:{pn}",
        "pump_phase": fmt(spec.pump_phase),
        "thetas": ",".join(fmt(t) for t in spec.thetas),
        "alpha_rule": EQUAL_CONTRIBUTION_RULE if spec.alpha is None
        else f"explicit |alpha0| = {fmt(spec.alpha)}",
        "normalization": NORMALIZATION_RULE
        if spec.quantity == "fringe" and spec.normalize else "none",
        "engines": ",".join(f"{e}={__version__}" for e in spec.engines),
    }


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    for key, value in table.meta.items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _parse_cell(text: str):
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return text


def from_csv(text: str) -> Table:
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            meta[key.strip()] = value.strip()
        elif line:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return Table(columns, rows, meta)
