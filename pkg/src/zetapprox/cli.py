"""Command-line interface.

Exit codes: 0 success, 1 file I/O error, 2 usage error, 3 fit stopped at
its cap, 4 a verified property failed, 5 numerical or input-data error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import pipeline
from .errors import CapExceeded, ZetapproxError
from .plotting import render_svg
from .polynomials import polynomial_from_dict
from .regions import build_sets
from .roots import poly_roots
from .zeta import find_zero_ordinates

log = logging.getLogger("zetapprox")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _t_max(text: str) -> float:
    v = float(text)
    if not 1.0 < v <= 100.0:
        raise argparse.ArgumentTypeError("t_max must satisfy 1 < t_max <= 100")
    return v


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_poly(path: str | None):
    if not path:
        return None
    data = json.loads(Path(path).read_text())
    return polynomial_from_dict(data.get("polynomial", data))


def cmd_zeros(args) -> int:
    table = find_zero_ordinates(args.t_max)
    _write(table.to_json() + "\n", args.out)
    return 0


def cmd_build_set(args) -> int:
    params, Q, zc, K, fat_K = build_sets(args.n, find_zero_ordinates(args.t_max))
    out = {"n": args.n, "zeros": [[a.real, a.imag] for a in zc.on_line_or_real],
           "off_line_zeros": [[a.real, a.imag] for a in zc.off_line],
           "Q": Q.to_dict(), "K": K.to_dict(), "fat_K": fat_K.to_dict()}
    _write(json.dumps(out, indent=2) + "\n", args.json)
    if args.samples_csv:
        ctx = pipeline.build_context(args.n, args.t_max, args.boundary_step, args.interior_step)
        ctx.samples.write_csv(args.samples_csv)
    return 0


def cmd_fit(args) -> int:
    ctx = pipeline.build_context(args.n, args.t_max, args.boundary_step, args.interior_step)
    cap = args.cap if args.cap is not None else (128 if args.kind == "algebraic" else 400)
    poly, report = pipeline.fit_family(ctx, args.kind, cap, args.objective)
    doc = {"polynomial": poly.to_dict(), "fit": report.to_dict(), "budget": ctx.budget.to_dict()}
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return pipeline.EXIT_CAP if report.cap_exceeded else 0


def cmd_verify(args) -> int:
    P, D = _load_poly(args.poly), _load_poly(args.dirichlet)
    if P is None and D is None:
        raise ValueError("verify: give --poly and/or --dirichlet")
    ctx = pipeline.build_context(args.n, args.t_max, args.boundary_step, args.interior_step)
    report = pipeline.verify_fits(ctx, P, D, args.boundary_step, args.interior_step, args.seed)
    _write(report.to_json() + "\n", args.report)
    return 0 if report.all_passed else pipeline.EXIT_VERIFY


def cmd_run(args) -> int:
    config = pipeline.RunConfig(
        n=args.n, kind=args.kind, degree_cap=args.degree_cap, length_cap=args.length_cap,
        boundary_step=args.boundary_step, interior_step=args.interior_step, t_max=args.t_max,
        seed=args.seed, objective=args.objective,
        output_dir=Path(args.out_dir) if args.out_dir else None, figures=not args.no_figures)
    report, code = pipeline.run_pipeline(config)
    summary = {k: v.passed for k, v in report.properties.items()}
    print(json.dumps({"n": args.n, "properties": summary, "exit_code": code}))
    return code


def cmd_plot(args) -> int:
    params, Q, zc, K, fat_K = build_sets(args.n, find_zero_ordinates(args.t_max))
    cset = fat_K if args.fat else K
    roots = []
    P = _load_poly(args.poly)
    if P is not None and hasattr(P, "hessenberg"):
        roots = [r.location for r in poly_roots(P)]
    if args.report:
        rep = json.loads(Path(args.report).read_text())
        for recs in rep.get("roots", {}).values():
            roots += [complex(r["re"], r["im"]) for r in recs]
    svg = render_svg(cset, zc.all_zeros, roots, title=f"K_{args.n}")
    _write(svg, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zetapprox", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="limit BLAS/solver threads")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, t_max=50.0):
        p.add_argument("--t-max", type=_t_max, default=t_max)
        p.add_argument("--boundary-step", type=float, default=0.05)
        p.add_argument("--interior-step", type=float, default=0.25)

    p = sub.add_parser("zeros", help="ordinates of critical-line zeros up to t_max")
    p.add_argument("--t-max", type=_t_max, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("build-set", help="emit Q_n, K_n and the fattened set as JSON")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--json")
    p.add_argument("--samples-csv")
    common(p)
    p.set_defaults(func=cmd_build_set)

    p = sub.add_parser("fit", help="fit one polynomial family")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--kind", choices=("algebraic", "dirichlet"), required=True)
    p.add_argument("--cap", type=int)
    p.add_argument("--objective", choices=("minimax", "lsq"), default="minimax")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="check the five properties for fitted polynomials")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--poly")
    p.add_argument("--dirichlet")
    p.add_argument("--report")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="full pipeline for one n")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--kind", choices=("algebraic", "dirichlet", "both"), default="both")
    p.add_argument("--degree-cap", type=int, default=128)
    p.add_argument("--length-cap", type=int, default=400)
    p.add_argument("--objective", choices=("minimax", "lsq"), default="minimax")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", help=f"defaults to ${pipeline.OUTPUT_ENV} or ./zetapprox_out")
    p.add_argument("--no-figures", action="store_true")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("plot", help="SVG figure of K_n with zeros and fitted roots")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--poly")
    p.add_argument("--report")
    p.add_argument("--fat", action="store_true", help="draw the fattened set")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with threadpool_limits(limits=args.threads):
            return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return pipeline.EXIT_CAP
    except ZetapproxError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return pipeline.EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
