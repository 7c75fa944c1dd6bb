"""End-to-end runs: zeros, sets, budget, fits, roots, verification, figures."""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fitting import (ALGEBRAIC_SCHEDULE, DIRICHLET_SCHEDULE, FitProblem, assemble_constraints,
                      fit_algebraic, fit_dirichlet)
from .plotting import render_svg
from .regions import build_sets, sample_set
from .roots import write_roots_csv
from .target import PiecewiseTarget, compute_budget
from .verify import VerificationReport, verify_all
from .zeta import find_zero_ordinates, zeta

log = logging.getLogger(__name__)

OUTPUT_ENV = "ZETAPPROX_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_VERIFY, EXIT_NUMERIC = 0, 2, 3, 4, 5


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "zetapprox_out"))


@dataclass(frozen=True)
class RunConfig:
    n: int
    kind: str = "both"
    degree_cap: int = 128
    length_cap: int = 400
    boundary_step: float = 0.05
    interior_step: float = 0.25
    t_max: float = 50.0
    seed: int = 0
    objective: str = "minimax"
    output_dir: Path | None = None
    figures: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind not in ("algebraic", "dirichlet", "both"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.degree_cap < 0 or self.length_cap < 1:
            raise ValueError("caps must be positive")
        if not (self.boundary_step > 0 and self.interior_step > 0):
            raise ValueError("sample steps must be positive")
        if not 1.0 < self.t_max <= 100.0:
            raise ValueError("t_max must satisfy 1 < t_max <= 100")
        if self.objective not in ("minimax", "lsq"):
            raise ValueError(f"unknown objective {self.objective!r}")

    @property
    def families(self) -> tuple[str, ...]:
        return ("algebraic", "dirichlet") if self.kind == "both" else (self.kind,)


@dataclass
class Context:
    """Everything that precedes fitting for one index n."""
    n: int
    zeros: object
    params: object
    Q: object
    zc: object
    K: object
    fat_K: object
    samples: object
    target: PiecewiseTarget
    budget: object
    constraints: list


def build_context(n: int, t_max: float = 50.0, boundary_step: float = 0.05,
                  interior_step: float = 0.25) -> Context:
    zeros = find_zero_ordinates(t_max)
    params, Q, zc, K, fat_K = build_sets(n, zeros)
    samples = sample_set(fat_K, boundary_step, interior_step)
    target = PiecewiseTarget(n, zc, fat_K)
    budget = compute_budget(target, samples)
    return Context(n, zeros, params, Q, zc, K, fat_K, samples, target, budget,
                   assemble_constraints(n, zc))


def fit_family(ctx: Context, kind: str, cap: int, objective: str = "minimax"):
    if kind == "algebraic":
        problem = FitProblem(ctx.samples, ctx.constraints, ctx.budget, cap, ALGEBRAIC_SCHEDULE, "algebraic")
        return fit_algebraic(problem, ctx.target, objective)
    problem = FitProblem(ctx.samples, ctx.constraints, ctx.budget, cap, DIRICHLET_SCHEDULE, "dirichlet")
    return fit_dirichlet(problem, ctx.target, objective)


def verification_inputs(ctx: Context, boundary_step: float, interior_step: float, seed: int):
    """K_n samples on a grid twice as fine, plus seeded real probes."""
    fine = sample_set(ctx.K, boundary_step / 2, interior_step / 2)
    box = ctx.K.bounding_box()
    probes = np.random.default_rng(seed).uniform(box.x0, box.x1, 1000)
    return fine, probes


def verify_fits(ctx: Context, P, D, boundary_step: float, interior_step: float,
                seed: int) -> VerificationReport:
    fine, probes = verification_inputs(ctx, boundary_step, interior_step, seed)
    scale_P = float(np.abs(P(ctx.samples.z)).max()) if P is not None else None
    scale_D = float(np.abs(D(ctx.samples.z)).max()) if D is not None else None
    report = verify_all(ctx.n, P, D, ctx.K, ctx.zc, fine, probes, scale_P, scale_D, ctx.target.settings)
    report.budget = ctx.budget.to_dict()
    return report


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


def run_pipeline(config: RunConfig) -> tuple[VerificationReport, int]:
    """Run every step for one n and write artifacts; returns (report, exit code).

    Exit code 0 when all five properties pass, 3 when a fit stopped at its
    cap without reaching epsilon_n, 4 when a property fails otherwise.
    """
    out = Path(config.output_dir) if config.output_dir is not None else default_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    ctx = build_context(config.n, config.t_max, config.boundary_step, config.interior_step)
    log.info("n=%d delta=%.6g epsilon=%.6g", config.n, ctx.budget.delta, ctx.budget.epsilon)
    polys, reports = {}, {}
    for kind in config.families:
        cap = config.degree_cap if kind == "algebraic" else config.length_cap
        p, rep = fit_family(ctx, kind, cap, config.objective)
        polys[kind], reports[kind] = p, rep
        _dump(out / f"{kind}_n{config.n}.json", {"polynomial": p.to_dict(), "fit": rep.to_dict()})
    P, D = polys.get("algebraic"), polys.get("dirichlet")
    report = verify_fits(ctx, P, D, config.boundary_step, config.interior_step, config.seed)
    report.fits = {k: r.to_dict() for k, r in reports.items()}
    report.fits["constraints"] = [c.to_dict() for c in ctx.constraints]
    (out / f"report_n{config.n}.json").write_text(report.to_json() + "\n")
    for name, roots in report.roots.items():
        write_roots_csv(roots, out / f"roots_{name}_n{config.n}.csv")
    if config.figures:
        roots = [r.location for rs in report.roots.values() for r in rs]
        heat = None
        if P is not None or D is not None:
            f = P if P is not None else D
            z = ctx.samples.z[ctx.samples.mask("Bulk")]
            heat = (z, np.abs(f(z) - zeta(z)), config.interior_step / 2)
        svg = render_svg(ctx.K, ctx.zc.all_zeros, roots, heat, title=f"K_{config.n}")
        (out / f"figure_n{config.n}.svg").write_text(svg)
    if any(r.cap_exceeded for r in reports.values()):
        code = EXIT_CAP
    elif not report.all_passed:
        code = EXIT_VERIFY
    else:
        code = EXIT_OK
    return report, code
