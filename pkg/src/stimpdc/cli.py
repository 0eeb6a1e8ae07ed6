"""Command-line entry point.

Examples:
  stimpdc fringe --gain 0.5 --theta 0,pi/4,pi/2
  stimpdc visibility --gain-range 0.1:4:40 --output fig3.csv
  stimpdc enhancement --gain-range 0.1:3:30 --engines closed,moment
  stimpdc verify
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

from . import __version__
from .errors import StimPDCError
from .sweep import (
    ENGINES,
    SweepSpec,
    Table,
    VerifyGrid,
    run,
    to_csv,
    verify,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_PARAMS = 0, 1, 2, 3

_ANGLE = re.compile(r"^\s*([+-]?\d*\.?\d*(?:e[+-]?\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$", re.I)

DEFAULT_GAINS = {
    "fringe": "0.5",
    "visibility": "0.1:4:40",
    "enhancement": "0.1:3:30",
    "singles": "0.5",
}
QUANTITY = {
    "fringe": "fringe",
    "visibility": "visibility_vs_gain",
    "enhancement": "enhancement_vs_gain",
    "singles": "singles",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_angle(text: str) -> float:
    """Radians from '0.3', 'pi', 'pi/2', '3pi/4' or '-0.5*pi'."""
    text = text.strip()
    m = _ANGLE.match(text)
    if m:
        factor = m.group(1)
        factor = 1.0 if factor in ("", "+") else -1.0 if factor == "-" else float(factor)
        denom = float(m.group(2)) if m.group(2) else 1.0
        return factor * math.pi / denom
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def angle_list(text: str) -> tuple[float, ...]:
    return tuple(parse_angle(t) for t in text.split(",") if t.strip())


def float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def gain_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            g = float(parts[0])
            return (g, g, 1)
        if len(parts) == 3:
            return (float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected START:STOP:STEPS, got {text!r}")


def engine_list(text: str) -> tuple[str, ...]:
    engines = tuple(e.strip() for e in text.split(",") if e.strip())
    bad = [e for e in engines if e not in ENGINES]
    if bad or not engines:
        raise argparse.ArgumentTypeError(f"engines must be drawn from {','.join(ENGINES)}")
    return engines


def on_off(text: str) -> bool:
    value = text.strip().lower()
    if value in ("on", "true", "yes", "1"):
        return True
    if value in ("off", "false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on|off, got {text!r}")


def _common(sub: argparse.ArgumentParser, name: str) -> None:
    sub.add_argument("--config", type=Path, help="plain 'key = value' file; flags win")
    grp = sub.add_mutually_exclusive_group()
    grp.add_argument("--gain", type=gain_range, dest="gain_range",
                     default=DEFAULT_GAINS[name], help="single gain")
    grp.add_argument("--gain-range", type=gain_range, dest="gain_range",
                     metavar="START:STOP:STEPS", default=DEFAULT_GAINS[name])
    sub.add_argument("--psi-steps", type=int, default=721,
                     help="samples of psi over [0, 2pi], endpoints included")
    sub.add_argument("--theta", type=angle_list, default="0,pi/4,pi/2",
                     help="comma-separated seed phases (radians, 'pi' allowed)")
    sub.add_argument("--pump-phase", type=parse_angle, default="pi")
    seed = sub.add_mutually_exclusive_group()
    seed.add_argument("--alpha", type=float, metavar="MOD", help="explicit seed modulus |alpha0|")
    seed.add_argument("--equal-contribution", action="store_true",
                      help="seed modulus from the equal-contribution rule (default)")
    sub.add_argument("--engines", type=engine_list, default="closed")
    sub.add_argument("--normalize", type=on_off, default="on" if name == "fringe" else "off")
    sub.add_argument("--output", type=Path, help="CSV path (default stdout)")
    sub.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stimpdc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in QUANTITY:
        _common(subs.add_parser(name, help=f"{name} sweep"), name)

    v = subs.add_parser("verify", help="cross-engine certification")
    v.add_argument("--config", type=Path)
    v.add_argument("--gains", type=float_list, default="0,0.2,0.5,0.8")
    v.add_argument("--alphas", type=float_list, default="0,0.5,1")
    v.add_argument("--deltas", type=angle_list, default="0,pi/2,pi")
    v.add_argument("--psis", type=angle_list, default="0,0.3,pi/2,2.1")
    v.add_argument("--random-points", type=int, default=1000)
    v.add_argument("--seed", type=int, default=VerifyGrid.seed)
    v.add_argument("--tol-closed-moment", type=float, default=VerifyGrid.tol_closed_moment)
    v.add_argument("--tol-fock", type=float, default=VerifyGrid.tol_fock)
    v.add_argument("--engines", type=engine_list, default="closed,moment,fock")
    v.add_argument("--output", type=Path)
    v.add_argument("--jobs", type=int, default=1)
    return parser


def read_config(path: Path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(sub: argparse.ArgumentParser, path: Path) -> None:
    """Install config values as parser defaults so explicit flags still win."""
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    # accept the flag spelling for renamed dests
    aliases = {"gain": "gain_range"}
    defaults = {}
    for key, value in read_config(path).items():
        dest = aliases.get(key, key)
        if dest not in actions:
            raise UsageError(f"unknown config key {key!r}")
        action = actions[dest]
        if action.nargs == 0:
            defaults[dest] = on_off(value)
        elif action.type is not None:
            try:
                defaults[dest] = action.type(value)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from None
        else:
            defaults[dest] = value
    sub.set_defaults(**defaults)


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
        sub = subs.choices[args.command]
        try:
            _apply_config(sub, args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        args = parser.parse_args(argv)
    return args


def spec_from_args(args: argparse.Namespace) -> SweepSpec:
    return SweepSpec(
        quantity=QUANTITY[args.command],
        gain_range=args.gain_range,
        psi_range=(0.0, 2.0 * math.pi, args.psi_steps),
        thetas=args.theta,
        alpha=None if args.equal_contribution else args.alpha,
        pump_phase=args.pump_phase,
        engines=args.engines,
        normalize=args.normalize,
        jobs=args.jobs,
    )


def _emit(table: Table, output: Path | None) -> None:
    text = to_csv(table)
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _run_verify(args: argparse.Namespace) -> int:
    grid = VerifyGrid(
        gains=args.gains,
        alphas=args.alphas,
        deltas=args.deltas,
        psis=args.psis,
        random_points=args.random_points,
        seed=args.seed,
        tol_closed_moment=args.tol_closed_moment,
        tol_fock=args.tol_fock,
        engines=args.engines,
        jobs=args.jobs,
    )
    report = verify(grid)
    table = report.table()
    table.meta = {"generator": f"stimpdc {__version__}", "quantity": "verify"}
    _emit(table, args.output)
    worst = {}
    for pt in report.points:
        worst[pt.kind] = max(worst.get(pt.kind, 0.0), pt.max_deviation)
    for kind, dev in worst.items():
        print(f"{kind}: max deviation {dev:.3e}", file=sys.stderr)
    status = "PASS" if report.passed else f"FAIL ({len(report.failures)} points)"
    print(f"verify: {status}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"stimpdc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify":
            return _run_verify(args)
        _emit(run(spec_from_args(args)), args.output)
    except StimPDCError as exc:
        print(f"stimpdc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"stimpdc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
