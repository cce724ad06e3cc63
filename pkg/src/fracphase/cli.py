"""
Command-line front end.

Every command writes a JSON document (to stdout, or to ``--json PATH``) whose
floats carry 17 significant digits, so identical invocations give identical
bytes. Exit codes: 0 success (for ``counterexample`` and ``verify``: verdict
true), 1 verdict false, 2 bad input, 3 degenerate angles, 4 grid too small.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .angles import RationalAngle, parse_angle, radians
from .counterexample import (
    normalize_angles,
    rational_counterexample,
    three_angle_counterexample,
)
from .errors import DegenerateAnglesError, FracPhaseError, GridTooSmallError
from .frft import frft_grid, frft_spectral, signal_intensity, signal_intensity_spectral
from .hermite import expand, max_index_for, synthesize
from .phasespace import radon_slice, wigner, wigner_from_csv, wigner_to_csv
from .signal import (
    DEFAULT_HALFWIDTH,
    DEFAULT_POINTS,
    Grid,
    IntensityProfile,
    SampledSignal,
    intensity_to_csv,
    signal_from_csv,
    signal_to_csv,
)
from .symplectic import CAVEAT, obstruction_search

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_GRID = 4


class InputError(FracPhaseError):
    """Bad command-line input (maps to exit code 2)."""


# ---------------------------------------------------------------------------
# output helpers

def encode_json(obj):
    """JSON text with floats at 17 significant digits; NaN and inf become null."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return format(v, ".17g") if math.isfinite(v) else "null"
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_json({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, RationalAngle):
        return encode_json(obj.radians)
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {encode_json(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(encode_json(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def emit(document, args):
    text = encode_json(document) + "\n"
    if getattr(args, "json", None):
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)


def write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_text(path):
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def parse_angles(texts):
    try:
        return [parse_angle(t) for t in texts]
    except FracPhaseError as exc:
        raise InputError(str(exc)) from exc


def parse_one_angle(text):
    return parse_angles([text])[0]


def grid_from_args(args):
    halfwidth = DEFAULT_HALFWIDTH if args.grid_halfwidth is None else args.grid_halfwidth
    points = DEFAULT_POINTS if args.grid_points is None else args.grid_points
    if halfwidth <= 0 or points < 2:
        raise InputError("grid half-width must be positive and grid points at least 2")
    return Grid.symmetric(halfwidth, points)


def spectral_index_limit(grid):
    """Largest Hermite index both covered by the grid and resolved by its spacing."""
    nyquist = math.pi / grid.dx
    return max(0, min(max_index_for(grid), int((nyquist * nyquist - 1) // 2)))


def is_full_turn(theta):
    return isinstance(theta, RationalAngle) and theta.is_rational and theta.fraction % 2 == 0


# ---------------------------------------------------------------------------
# commands

def cmd_counterexample(args):
    angles = parse_angles(args.angles)
    if len(angles) < 3:
        raise InputError("counterexample needs at least three angles")
    distinct = normalize_angles(angles)
    if len(distinct) < len(angles):
        raise DegenerateAnglesError("angles coincide modulo pi")
    all_rational = all(a.is_rational for a in angles)
    if all_rational:
        grid = grid_from_args(args)
        tol = 1e-10 if args.tol is None else args.tol
        plus, minus, report = rational_counterexample(angles, grid, tol)
        densities = [
            (signal_intensity_spectral(plus, t, grid), signal_intensity_spectral(minus, t, grid))
            for t in angles
        ]
    elif len(angles) == 3:
        explicit = args.grid_halfwidth is not None or args.grid_points is not None
        grid = grid_from_args(args) if explicit else None
        tol = 1e-5 if args.tol is None else args.tol
        thetas = [radians(a) for a in angles]
        phi_plus, phi_minus, report = three_angle_counterexample(*thetas, grid=grid, tol=tol)
        densities = [
            (signal_intensity(phi_plus, t), signal_intensity(phi_minus, t)) for t in thetas
        ]
    else:
        sys.stderr.write(
            "no construction available: more than three angles with an "
            "irrational difference\n"
        )
        return EXIT_FALSE
    if args.emit_densities:
        out_dir = Path(args.emit_densities)
        out_dir.mkdir(parents=True, exist_ok=True)
        for j, (d_plus, d_minus) in enumerate(densities):
            (out_dir / f"plus_angle{j}.csv").write_text(intensity_to_csv(d_plus))
            (out_dir / f"minus_angle{j}.csv").write_text(intensity_to_csv(d_minus))
    emit(report.to_dict(), args)
    return EXIT_OK if report.verdict else EXIT_FALSE


def _load_signal(path):
    return signal_from_csv(read_text(path))


def _spectral_expansion(psi, max_index):
    n_max = spectral_index_limit(psi.grid) if max_index is None else max_index
    return expand(psi, n_max)


def cmd_frft(args):
    psi = _load_signal(args.input)
    theta = parse_one_angle(args.angle)
    if is_full_turn(theta):
        out = SampledSignal(psi.grid, psi.values.copy())
    elif args.method == "grid":
        out = frft_grid(psi, theta)
    else:
        out = synthesize(frft_spectral(_spectral_expansion(psi, args.max_index), theta), psi.grid)
    write_text(args.output, signal_to_csv(out))
    return EXIT_OK


def cmd_intensity(args):
    psi = _load_signal(args.input)
    theta = parse_one_angle(args.angle)
    if is_full_turn(theta):
        profile = IntensityProfile.from_values(psi.grid, psi.density(), clamp=True)
    elif args.method == "grid":
        profile = signal_intensity(psi, theta)
    else:
        e = _spectral_expansion(psi, args.max_index)
        profile = signal_intensity_spectral(e, theta, psi.grid)
    write_text(args.output, intensity_to_csv(profile))
    return EXIT_OK


def cmd_wigner(args):
    psi = _load_signal(args.input)
    halfwidth = psi.grid.halfwidth if args.p_halfwidth is None else args.p_halfwidth
    points = psi.grid.n_points if args.p_points is None else args.p_points
    if halfwidth <= 0 or points < 2:
        raise InputError("momentum grid needs a positive half-width and at least 2 points")
    W = wigner(psi, Grid.symmetric(halfwidth, points))
    write_text(args.output, wigner_to_csv(W))
    return EXIT_OK


def cmd_radon(args):
    W = wigner_from_csv(read_text(args.input))
    theta = radians(parse_one_angle(args.angle))
    radius = W.inscribed_radius()
    halfwidth = 0.99 * radius if args.out_halfwidth is None else args.out_halfwidth
    points = W.q_grid.n_points if args.out_points is None else args.out_points
    if halfwidth <= 0 or points < 2:
        raise InputError("output grid needs a positive half-width and at least 2 points")
    profile = radon_slice(W, theta, Grid.symmetric(halfwidth, points), order=args.order)
    write_text(args.output, intensity_to_csv(profile))
    return EXIT_OK


def cmd_obstruction(args):
    theta4 = parse_one_angle(args.theta4)
    if args.max_denominator < 2:
        raise InputError(f"--max-denominator must be at least 2, got {args.max_denominator}")
    report = obstruction_search(theta4, args.max_denominator)
    document = report.to_dict()
    document["theta4_label"] = str(theta4)
    document["caveat"] = CAVEAT
    emit(document, args)
    sys.stderr.write(CAVEAT + "\n")
    return EXIT_OK


def _parse_bounds(items):
    bounds = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--bound expects NAME=VALUE, got {item!r}")
        try:
            bounds[name] = float(value)
        except ValueError:
            raise InputError(f"bad bound value in {item!r}") from None
    known = {c.name for c in verify_mod.REGISTRY}
    unknown = sorted(set(bounds) - known)
    if unknown:
        raise InputError(f"unknown check names: {', '.join(unknown)}")
    return bounds


def cmd_verify(args):
    bounds = _parse_bounds(args.bound)
    results = verify_mod.run_checks([args.suite], bounds)
    for r in results:
        relation = "<=" if r.kind == "max" else ">"
        status = "PASS" if r.passed else "FAIL"
        sys.stderr.write(
            f"{status}  {r.suite:<14} {r.name:<48} {r.measured:.3e} {relation} {r.bound:.1e}"
            f"  ({r.seconds:.1f}s)\n"
        )
        if r.error:
            sys.stderr.write(f"      {r.error}\n")
    passed = all(r.passed for r in results)
    emit(
        {
            "suite": args.suite,
            "passed": passed,
            "failed_checks": [r.name for r in results if not r.passed],
            "checks": [r.to_dict() for r in results],
        },
        args,
    )
    return EXIT_OK if passed else EXIT_FALSE


# ---------------------------------------------------------------------------
# parser

def _add_grid_flags(p):
    p.add_argument("--grid-halfwidth", type=float, default=None,
                   help=f"half-width of the symmetric grid (default {DEFAULT_HALFWIDTH:g})")
    p.add_argument("--grid-points", type=int, default=None,
                   help=f"number of grid points (default {DEFAULT_POINTS})")


def _add_json_flag(p):
    p.add_argument("--json", metavar="PATH", help="write the JSON report here instead of stdout")


def _add_transform_flags(p):
    p.add_argument("input", help="signal CSV (x,re,im); '-' for stdin")
    p.add_argument("angle", help="angle, e.g. pi/4, 3pi/8, 0.7")
    p.add_argument("--method", choices=("spectral", "grid"), default="spectral")
    p.add_argument("--max-index", type=int, default=None,
                   help="Hermite cutoff for the spectral method")
    p.add_argument("-o", "--output", default=None, help="output CSV (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fracphase",
        description="Quadrature densities, fractional Fourier transforms and "
        "pure-state counterexamples for rotated quadratures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counterexample", help="two states with equal densities at given angles")
    p.add_argument("angles", nargs="+", help="at least three angles")
    _add_grid_flags(p)
    p.add_argument("--tol", type=float, default=None,
                   help="sup-norm tolerance (default 1e-10 rational path, 1e-5 otherwise)")
    p.add_argument("--emit-densities", metavar="DIR", help="write the density CSVs here")
    _add_json_flag(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("frft", help="fractional Fourier transform of a signal CSV")
    _add_transform_flags(p)
    p.set_defaults(func=cmd_frft)

    p = sub.add_parser("intensity", help="quadrature density of a signal CSV")
    _add_transform_flags(p)
    p.set_defaults(func=cmd_intensity)

    p = sub.add_parser("wigner", help="Wigner function of a signal CSV")
    p.add_argument("input", help="signal CSV (x,re,im); '-' for stdin")
    p.add_argument("--p-halfwidth", type=float, default=None)
    p.add_argument("--p-points", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("radon", help="line integrals of a Wigner CSV")
    p.add_argument("input", help="Wigner CSV (q,p,w); '-' for stdin")
    p.add_argument("angle")
    p.add_argument("--out-halfwidth", type=float, default=None)
    p.add_argument("--out-points", type=int, default=None)
    p.add_argument("--order", type=int, choices=(1, 3), default=3,
                   help="interpolation order: 3 cubic (default) or 1 bilinear")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_radon)

    p = sub.add_parser("obstruction", help="bounded search for a rational fourth line")
    p.add_argument("theta4", help="fourth angle, e.g. acot(pi)")
    p.add_argument("--max-denominator", type=int, default=6)
    _add_json_flag(p)
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("verify", help="run numerical self-checks")
    p.add_argument("--suite", choices=verify_mod.SUITES + ("all",), default="all")
    p.add_argument("--bound", action="append", metavar="NAME=VALUE",
                   help="override a check's bound (repeatable)")
    _add_json_flag(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DegenerateAnglesError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DEGENERATE
    except GridTooSmallError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_GRID
    except FracPhaseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
