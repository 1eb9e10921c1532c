"""
Command-line frontend: `polar-sl {spectrum,density,hft,transform,verify}`.

Exit codes: 0 success, 1 verification or solver failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __description__, __version__
from .config import VerifyConfig
from .errors import PolarError
from .hft import hft_verify
from .legendre import normalized_theta, polar_density
from .liouville import DerivativeMode, SturmLiouvilleProblem, transform
from .output import emit_plot, to_csv, to_json, write_text
from .polar import GridSpec, compute_spectrum, lambda_from_m
from .verify import run_verification

logger = logging.getLogger(__name__)

SPECTRUM_HEADER = ("n", "l", "m", "W_computed", "W_exact", "rel_error")
DENSITY_HEADER = ("theta", "Theta_normalized", "density")
TRANSFORM_HEADER = ("theta", "U_eff", "U_paper", "abs_diff")


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be a nonnegative integer, got {text}")
    return value


def _grid(text: str) -> int:
    value = int(text)
    if value < 16:
        raise argparse.ArgumentTypeError(f"grid must be at least 16, got {text}")
    return value


# ------------------------------ Commands ---------------------------------


def cmd_spectrum(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    result = compute_spectrum(args.m, args.levels, GridSpec(args.grid), args.richardson)
    if args.format == "json":
        text = to_json(result.to_dict())
    else:
        text = to_csv(
            SPECTRUM_HEADER,
            ((lv.n, lv.l, result.m, lv.W_computed, lv.W_exact, lv.rel_error) for lv in result.levels),
        )
    write_text(text, args.output)
    return 0


def cmd_density(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.l < 0 or abs(args.m) > args.l:
        parser.error(f"need 0 <= |m| <= l, got l={args.l}, m={args.m}")
    theta = np.linspace(0.0, math.pi, args.samples)
    Theta = np.atleast_1d(normalized_theta(args.l, args.m, theta))
    dens = polar_density(args.l, args.m, theta)

    if args.format == "json":
        text = to_json(
            {
                "l": dens.index.l,
                "m": dens.index.m,
                "theta": theta.tolist(),
                "Theta_normalized": Theta.tolist(),
                "density": dens.density_values.tolist(),
            }
        )
    else:
        text = to_csv(DENSITY_HEADER, zip(theta, Theta, dens.density_values))
    write_text(text, args.output)

    if args.emit_plot:
        dat, script = emit_plot(
            args.emit_plot,
            {"theta": theta, "density": dens.density_values},
            xlabel="theta",
            ylabel="probability density",
            title=f"polar density l={dens.index.l} |m|={dens.index.m}",
        )
        logger.info("Wrote %s and %s", dat, script)
    return 0


def cmd_hft(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    report = hft_verify(
        args.m,
        args.n,
        GridSpec(args.grid),
        delta=args.delta,
        tolerance=args.tolerance,
        richardson_levels=args.richardson,
    )
    write_text(to_json(report.to_dict()))
    return 0 if report.passed else 1


def cmd_transform(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    theta = GridSpec(args.grid).nodes
    U = transform(SturmLiouvilleProblem.polar(args.m, theta), DerivativeMode.parse(args.derivatives))
    u_closed = lambda_from_m(args.m) / np.sin(theta) ** 2
    diff = np.abs(U.values + 0.125 - u_closed)

    if args.format == "json":
        text = to_json(
            {
                "m": abs(args.m),
                "derivatives": args.derivatives,
                "grid": GridSpec(args.grid).to_dict(),
                "theta": theta.tolist(),
                "U_eff": U.values.tolist(),
                "U_paper": u_closed.tolist(),
                "abs_diff": diff.tolist(),
                "max_abs_diff": float(np.max(diff)),
            }
        )
    else:
        text = to_csv(TRANSFORM_HEADER, zip(theta, U.values, u_closed, diff))
    write_text(text, args.output)

    if args.emit_plot:
        emit_plot(
            args.emit_plot,
            {"theta": theta, "U_eff+1/8": U.shifted(0.125), "U_paper": u_closed},
            xlabel="theta",
            ylabel="potential",
            title=f"effective polar potential |m|={abs(args.m)}",
        )
    return 0


def cmd_verify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    config = VerifyConfig(
        max_l=args.max_l,
        tol_spectrum_m_pos=args.tol_spectrum_m_pos,
        tol_spectrum_m0=args.tol_spectrum_m0,
        tol_hft=args.tol_hft,
        tol_quadrature=args.tol_quadrature,
        grid=args.grid,
        spectrum_grid=args.spectrum_grid,
        richardson=args.richardson,
    )
    results = run_verification(config)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


# ------------------------------ Parser -----------------------------------


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="Output format")
    p.add_argument("--output", type=Path, help="Write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polar-sl", description=__description__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug (stderr)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Polar eigenvalues against W_l = (l + 1/2)^2 / 2")
    p.add_argument("--m", type=int, required=True, help="Magnetic quantum number")
    p.add_argument("--levels", type=_positive_int, required=True, help="Number of levels n = 0 ..")
    p.add_argument("--grid", type=_grid, default=1024, help="Base grid N (h = pi/N)")
    p.add_argument("--richardson", type=int, choices=(1, 2, 3), default=3, help="Grids combined")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("density", help="Normalized polar probability density")
    p.add_argument("--l", type=int, required=True, help="Orbital quantum number")
    p.add_argument("--m", type=int, required=True, help="Magnetic quantum number")
    p.add_argument("--samples", type=_positive_int, default=181, help="Uniform samples on [0, pi]")
    p.add_argument("--emit-plot", type=Path, metavar="PATH", help="Write PATH.dat and PATH.gp")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_density)

    p = sub.add_parser("hft", help="Hellmann-Feynman check of dW/dlambda")
    p.add_argument("--m", type=int, required=True, help="Magnetic quantum number (m != 0)")
    p.add_argument("--n", type=_nonnegative_int, required=True, help="Radial-like level index")
    p.add_argument("--delta", type=float, help="Coupling step for central differences")
    p.add_argument("--grid", type=_grid, default=4096, help="Grid N")
    p.add_argument("--richardson", type=int, choices=(1, 2, 3), default=3, help="Grids combined")
    p.add_argument("--tolerance", type=float, default=1e-3, help="Pairwise relative tolerance")
    p.set_defaults(handler=cmd_hft)

    p = sub.add_parser("transform", help="Effective potential of the Liouville-transformed equation")
    p.add_argument("--m", type=int, required=True, help="Magnetic quantum number")
    p.add_argument("--grid", type=_grid, default=64, help="Grid N")
    p.add_argument("--derivatives", choices=("analytic", "fd"), default="analytic", help="Weight derivatives")
    p.add_argument("--emit-plot", type=Path, metavar="PATH", help="Write PATH.dat and PATH.gp")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_transform)

    defaults = VerifyConfig()
    p = sub.add_parser("verify", help="Run the full acceptance suite")
    p.add_argument("--max-l", type=int, default=defaults.max_l)
    p.add_argument("--tol-spectrum-m-pos", type=float, default=defaults.tol_spectrum_m_pos)
    p.add_argument("--tol-spectrum-m0", type=float, default=defaults.tol_spectrum_m0)
    p.add_argument("--tol-hft", type=float, default=defaults.tol_hft)
    p.add_argument("--tol-quadrature", type=float, default=defaults.tol_quadrature)
    p.add_argument("--grid", type=int, default=defaults.grid)
    p.add_argument("--spectrum-grid", type=int, default=defaults.spectrum_grid)
    p.add_argument("--richardson", type=int, default=defaults.richardson)
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args, parser)
    except PolarError as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
