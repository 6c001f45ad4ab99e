"""chronoscale command line: batch analyses over scale/signal/system files.

Exit codes: 0 ok, 2 input error, 3 numeric precondition, 4 contour/ROC,
5 scale mismatch.  Every library error surfaces with its class name in the
message so failures can be scripted against.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as cio
from .calculus import antiderivative, definite_integral, derivative  # noqa: F401
from .errors import (
    BoundaryIndex,
    ChronoscaleError,
    ContourInvalid,
    DegenerateDenominator,
    FileFormatError,
    ImproperRational,
    IncompatibleStep,
    IndexOutOfRange,
    InvalidStep,
    NonMonotone,
    OrderZeroOrNegative,
    PoleHit,
    PoleOnScale,
    ReflectionOffGrid,
    RepeatedGraininess,
    ReversedInterval,
    ScaleMismatch,
    SingularStep,
    SupportTouchesBoundary,
    TargetOffSuperScale,
    TooShort,
    UntaggedPole,
    WindowTooSmall,
)
from .fractional import fractional_derivative
from .systems import convolve, impulse_response, resample_uniform, simulate
from .transform import Contour, auto_contour, direct_transform

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_CONTOUR_ROC = 4
EXIT_SCALE_MISMATCH = 5

_INPUT_ERRORS = (
    FileFormatError,
    NonMonotone,
    TooShort,
    IndexOutOfRange,
    InvalidStep,
    OrderZeroOrNegative,
)
_CONTOUR_ROC_ERRORS = (ContourInvalid, UntaggedPole)
_MISMATCH_ERRORS = (ScaleMismatch, ReflectionOffGrid, TargetOffSuperScale)
_NUMERIC_ERRORS = (
    BoundaryIndex,
    WindowTooSmall,
    SupportTouchesBoundary,
    ReversedInterval,
    PoleHit,
    PoleOnScale,
    ImproperRational,
    DegenerateDenominator,
    SingularStep,
    RepeatedGraininess,
    IncompatibleStep,
)


def _exit_code(exc: ChronoscaleError) -> int:
    if isinstance(exc, _INPUT_ERRORS):
        return EXIT_INPUT
    if isinstance(exc, _CONTOUR_ROC_ERRORS):
        return EXIT_CONTOUR_ROC
    if isinstance(exc, _MISMATCH_ERRORS):
        return EXIT_SCALE_MISMATCH
    if isinstance(exc, _NUMERIC_ERRORS):
        return EXIT_NUMERIC
    return EXIT_NUMERIC


def parse_s_grid(spec: str) -> list[complex]:
    """Parse `re+imj` tokens or a `re0:re1:count,im` linear range."""
    spec = spec.strip()
    if ":" in spec:
        head, _, im_part = spec.partition(",")
        parts = head.split(":")
        if len(parts) != 3:
            raise FileFormatError(
                f"range spec must be re0:re1:count[,im], got {spec!r}"
            )
        try:
            re0, re1 = float(parts[0]), float(parts[1])
            count = int(parts[2])
            im = float(im_part) if im_part else 0.0
        except ValueError as exc:
            raise FileFormatError(f"bad s-grid range {spec!r}: {exc}") from exc
        if count < 1:
            raise FileFormatError("s-grid range needs count >= 1")
        res = np.linspace(re0, re1, count)
        return [complex(r, im) for r in res]
    tokens = [tok for tok in spec.split(",") if tok.strip()]
    if not tokens:
        raise FileFormatError("empty s-grid")
    out = []
    for tok in tokens:
        try:
            out.append(complex(tok.strip().replace(" ", "")))
        except ValueError as exc:
            raise FileFormatError(f"bad s token {tok!r}: {exc}") from exc
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronoscale",
        description="Signals-and-systems calculus on nonuniform time scales.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, signal=True, out=True):
        p.add_argument("--scale", required=True, help="time-scale JSON file")
        if signal:
            p.add_argument("--signal", required=True, help="signal CSV file")
        if out:
            p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("deriv", help="nabla/delta derivative of a signal")
    common(p)
    p.add_argument("--dir", choices=["nabla", "delta"], default="nabla")
    p.add_argument("--order", type=int, default=1)

    p = sub.add_parser("antideriv", help="nabla/delta antiderivative")
    common(p)
    p.add_argument("--dir", choices=["nabla", "delta"], default="nabla")

    p = sub.add_parser("transform", help="direct transform on an s-grid")
    common(p)
    p.add_argument("--dir", choices=["nabla", "delta"], default="nabla",
                   help="transform kind")
    p.add_argument("--s-grid", required=True,
                   help="comma-separated complex tokens like 0.5+0.25j, or a "
                        "linear range re0:re1:count[,im]")

    p = sub.add_parser("invert", help="closed-form inverse of a rational transform")
    common(p, signal=False)
    p.add_argument("--system", required=True, help="rational transform JSON")
    p.add_argument("--roc", choices=["causal", "anticausal"],
                   help="tag every pole with this region of convergence")

    p = sub.add_parser("simulate", help="march a dynamic equation over the window")
    common(p)
    p.add_argument("--system", required=True, help='equation JSON {"a": .., "b": ..}')

    p = sub.add_parser("convolve", help="convolve two signals on one scale")
    common(p)
    p.add_argument("--signal2", required=True, help="second signal CSV")
    p.add_argument("--interpolate", action="store_true",
                   help="allow the interpolating path on non-shift-closed grids")
    p.add_argument("--nodes", type=int, default=4096)

    p = sub.add_parser("fracderiv", help="fractional derivative of a signal")
    common(p)
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("resample", help="resample onto a uniform grid")
    common(p)
    p.add_argument("--h", type=float, required=True, help="uniform step")
    p.add_argument("--nodes", type=int, default=4096)

    return parser


def _run(args: argparse.Namespace) -> int:
    scale = cio.load_time_scale(args.scale)

    if args.command == "deriv":
        signal = cio.load_signal(args.signal, scale)
        if args.order < 1:
            raise OrderZeroOrNegative(f"--order must be >= 1, got {args.order}")
        cio.save_signal(derivative(signal, args.dir, args.order), args.out)
        return EXIT_OK

    if args.command == "antideriv":
        signal = cio.load_signal(args.signal, scale)
        cio.save_signal(antiderivative(signal, args.dir), args.out)
        return EXIT_OK

    if args.command == "transform":
        signal = cio.load_signal(args.signal, scale)
        grid = parse_s_grid(args.s_grid)
        lines = ["s_re,s_im,F_re,F_im"]
        for s in grid:
            try:
                value = direct_transform(signal, s, args.dir)
            except PoleHit as exc:
                raise PoleHit(f"s={s!r}: {exc}") from exc
            lines.append(
                ",".join(
                    format(v, cio.FLOAT_FMT)
                    for v in (s.real, s.imag, value.real, value.imag)
                )
            )
        Path(args.out).write_text("\n".join(lines) + "\n")
        return EXIT_OK

    if args.command == "invert":
        rt = cio.load_rational(args.system, default_roc=args.roc)
        if args.roc:
            rt = rt.retagged(args.roc)
        cio.save_signal(impulse_response(rt, scale), args.out)
        return EXIT_OK

    if args.command == "simulate":
        signal = cio.load_signal(args.signal, scale)
        a, b = cio.load_system(args.system)
        out, summary = simulate(a, b, signal, with_summary=True)
        cio.save_signal(out, args.out)
        print(
            f"simulate: steps={summary.steps} "
            f"singular_margin={summary.singular_margin:.3e}"
        )
        return EXIT_OK

    if args.command == "convolve":
        f = cio.load_signal(args.signal, scale)
        g = cio.load_signal(args.signal2, scale)
        contour = None
        if args.interpolate:
            contour = auto_contour(scale, nodes=args.nodes)
        result = convolve(f, g, allow_interpolation=args.interpolate, contour=contour)
        cio.save_signal(result, args.out)
        return EXIT_OK

    if args.command == "fracderiv":
        signal = cio.load_signal(args.signal, scale)
        cio.save_signal(fractional_derivative(signal, args.alpha), args.out)
        return EXIT_OK

    if args.command == "resample":
        signal = cio.load_signal(args.signal, scale)
        contour = auto_contour(scale, nodes=args.nodes)
        cio.save_signal(resample_uniform(signal, args.h, contour=contour), args.out)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command!r}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ChronoscaleError as exc:
        code = _exit_code(exc)
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
