"""``fibdyn`` command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 numeric failure.  Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import acceptance
from .core import FibonacciSystem, Polynomial, classify_orbit, parse_complex
from .errors import (
    ConstructionFailed,
    FibdynError,
    NoContour,
    NumericOverflow,
    TolUnreachable,
)
from .locus import locus_grid
from .potential import capacity_sigma, green_diag
from .raster import (
    Region,
    colorize_and_write,
    hausdorff_distance,
    membership_grid,
    parse_resolution,
    trace_boundary,
    write_polyline,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3
_NUMERIC_ERRORS = (NumericOverflow, TolUnreachable, ConstructionFailed, NoContour)
# values such as "-0.5+0.5i" would otherwise be mistaken for options
_VALUE_FLAGS = {"--c", "--z", "--center", "--f"}
_NEG_VALUE = re.compile(r"^-[\d.]")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a complex literal like 1.5-0.5i, got {text!r}")


def _poly_arg(text: str) -> Polynomial:
    try:
        return Polynomial.parse(text)
    except (ValueError, FibdynError) as exc:
        raise argparse.ArgumentTypeError(f"bad polynomial {text!r}: {exc}")


def _res_arg(text: str) -> tuple:
    try:
        return parse_resolution(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH or N, got {text!r}")


def _exponents_arg(text: str) -> tuple:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers a,b, got {text!r}")
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("exponents must be positive")
    return a, b


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _fmt(x: float) -> str:
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fibdyn", description="Complex Fibonacci dynamics: f_{n+1} = f_n f_{n-1} + c.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, f_default="0,1", c=True):
        if c:
            sp.add_argument("--c", type=_complex_arg, default=0j, help="parameter c (default 0)")
        sp.add_argument("--f", type=_poly_arg, default=Polynomial.parse(f_default),
                        help=f"seed polynomial, coefficients low degree first (default {f_default})")

    def raster_opts(sp, res, max_iter, width, out):
        sp.add_argument("--res", type=_res_arg, default=res, help=f"WxH or N (default {res[0]}x{res[1]})")
        sp.add_argument("--max-iter", type=_positive_int, default=max_iter,
                        help="iteration budget (default %(default)s)")
        sp.add_argument("--center", type=_complex_arg, default=0j, help="region center (default 0)")
        sp.add_argument("--width", type=_positive_float, default=width,
                        help="region width (default %(default)s)")
        sp.add_argument("--out", type=Path, default=Path(out), help="output file (default %(default)s)")
        sp.add_argument("--format", choices=("ppm", "csv"), default=None,
                        help="output format (default from the file extension, else ppm)")
        sp.add_argument("--scheme", choices=("default", "gray"), default="default",
                        help="colour scheme (default %(default)s)")
        sp.add_argument("--tile", type=_positive_int, default=64, help="tile size (default 64)")
        sp.add_argument("--workers", type=_positive_int, default=None,
                        help="worker threads (default FIBDYN_THREADS or CPU count)")

    sp = sub.add_parser("julia", help="render the diagonal filled Julia slice")
    common(sp)
    raster_opts(sp, (1024, 1024), 500, 4.0, "julia.ppm")
    sp.add_argument("--exponents", type=_exponents_arg, default=(1, 1),
                    help="exponents a,b of f_n**a f_(n-1)**b (default 1,1)")
    sp.add_argument("--green-tol", type=_positive_float, default=1e-6,
                    help="Green tolerance used for smooth shading (default %(default)s)")
    sp.add_argument("--no-green", action="store_true", help="shade by raw escape index")

    sp = sub.add_parser("locus", help="render the critical-orbit connectedness locus")
    common(sp, "0,0,1", c=False)
    raster_opts(sp, (512, 512), 10_000, 4.4, "locus.ppm")

    sp = sub.add_parser("green", help="Green's function with error bound")
    common(sp)
    sp.add_argument("--z", type=_complex_arg, required=True, help="point z")
    sp.add_argument("--tol", type=_positive_float, default=1e-10, help="tolerance (default %(default)s)")
    sp.add_argument("--max-iter", type=_positive_int, default=1000,
                    help="classification budget (default %(default)s)")

    sp = sub.add_parser("capacity", help="capacity exponent sigma")
    common(sp, c=False)
    sp.add_argument("--terms", type=_positive_int, default=40, help="series terms (default 40)")

    sp = sub.add_parser("membership", help="classify one point")
    common(sp)
    sp.add_argument("--z", type=_complex_arg, required=True, help="point z")
    sp.add_argument("--max-iter", type=_positive_int, default=1000,
                    help="iteration budget (default %(default)s)")

    sp = sub.add_parser("boundary", help="trace the Julia slice boundary (f = z)")
    sp.add_argument("--c", type=_complex_arg, default=0j, help="parameter c (default 0)")
    sp.add_argument("--res", type=_positive_int, default=1024, help="grid size N (default 1024)")
    sp.add_argument("--max-iter", type=_positive_int, default=1000,
                    help="iteration budget (default %(default)s)")
    sp.add_argument("--out", type=Path, default=Path("boundary.csv"),
                    help="polyline CSV (default %(default)s)")
    sp.add_argument("--workers", type=_positive_int, default=None,
                    help="worker threads (default FIBDYN_THREADS or CPU count)")

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--fast", action="store_true", help="reduced sample sizes")
    return p


def _normalize(argv: list) -> list:
    out = []
    k = 0
    while k < len(argv):
        a = argv[k]
        if a in _VALUE_FLAGS and k + 1 < len(argv) and _NEG_VALUE.match(argv[k + 1]):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def parse_args(argv) -> argparse.Namespace:
    return build_parser().parse_args(_normalize(list(argv)))


def _format_of(args) -> str:
    if args.format:
        return args.format
    return "csv" if args.out.suffix.lower() == ".csv" else "ppm"


def _region(args) -> Region:
    return Region.from_resolution(args.center, args.width, args.res)


def _cmd_julia(args, out) -> int:
    sys_ = FibonacciSystem(args.f, args.c, args.exponents)
    tol = None if args.no_green or not sys_.is_classic else args.green_tol
    grid = membership_grid(sys_, _region(args), args.res, args.max_iter, green_tol=tol,
                           tile_size=args.tile, workers=args.workers)
    colorize_and_write(grid, args.out, _format_of(args), args.scheme)
    print(f"wrote {args.out} ({grid.W}x{grid.H})", file=out)
    return EXIT_OK


def _cmd_locus(args, out) -> int:
    grid = locus_grid(_region(args), args.res, args.f, args.max_iter,
                      tile_size=args.tile, workers=args.workers)
    colorize_and_write(grid, args.out, _format_of(args), args.scheme)
    print(f"wrote {args.out} ({grid.W}x{grid.H})", file=out)
    return EXIT_OK


def _cmd_green(args, out) -> int:
    est = green_diag(args.z, FibonacciSystem(args.f, args.c), args.tol, args.max_iter)
    print(f"value={_fmt(est.value)} errorBound={_fmt(est.error_bound)}", file=out)
    return EXIT_OK


def _cmd_capacity(args, out) -> int:
    res = capacity_sigma(FibonacciSystem(args.f), args.terms)
    print(f"sigma={_fmt(res.sigma)} tail={_fmt(res.tail_bound)}", file=out)
    return EXIT_OK


def _cmd_membership(args, out) -> int:
    v = classify_orbit(args.z, FibonacciSystem(args.f, args.c), args.max_iter)
    print(json.dumps(v.as_dict()), file=out)
    return EXIT_OK


def _cmd_boundary(args, out) -> int:
    poly = trace_boundary(args.c, args.res, args.max_iter, workers=args.workers)
    write_polyline(poly, args.out)
    print(f"hausdorff={_fmt(hausdorff_distance(poly))} vertices={len(poly)}", file=out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    results = acceptance.run_all(args.fast, report=lambda line: print(line, file=out, flush=True))
    failed = [r.number for r in results if not r.passed]
    if failed:
        print(f"verification failed: criteria {', '.join(map(str, failed))}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


_COMMANDS = {
    "julia": _cmd_julia,
    "locus": _cmd_locus,
    "green": _cmd_green,
    "capacity": _cmd_capacity,
    "membership": _cmd_membership,
    "boundary": _cmd_boundary,
    "verify": _cmd_verify,
}


def execute(args: argparse.Namespace, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        return _COMMANDS[args.command](args, out)
    except _NUMERIC_ERRORS as exc:
        print(f"fibdyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FibdynError as exc:
        print(f"fibdyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"fibdyn: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
