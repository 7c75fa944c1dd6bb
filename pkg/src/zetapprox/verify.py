"""Numerical checks of the five approximation properties for (P_n, D_n).

P1  sup |P - zeta| and sup |D - zeta| on K_n minus the pole are <= 1/n
P2  P(1) = D(1) = n
P3  zeros in K_n near the real axis or the critical line are exactly the
    zeta zeros there, and simple
P4  no zeros in K_n away from the real axis and the critical line
P5  real coefficients, so P and D are real on the real axis
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ContourTooClose
from .geometry import Rect
from .polynomials import AlgebraicPolynomial, DirichletPolynomial
from .regions import POLE, CompactSet, Samples, ZeroClassification
from .roots import RootRecord, count_zeros, dirichlet_roots_in, poly_roots
from .zeta import DEFAULT_SETTINGS, EvalSettings, zeta

TUBE = 1e-4
INTERP_TOL = 1e-8


@dataclass
class PropertyResult:
    passed: bool
    metric: float
    tol: float
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"pass": self.passed, "metric": self.metric, "tol": self.tol}
        if self.detail:
            out["detail"] = self.detail
        return out


def in_tubes(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return (np.abs(z.imag) <= TUBE) | (np.abs(z.real - 0.5) <= TUBE)


def _families(P, D):
    return [(name, f) for name, f in (("P", P), ("D", D)) if f is not None]


def verify_P1(P, D, samples: Samples, n: int,
              settings: EvalSettings = DEFAULT_SETTINGS) -> PropertyResult:
    """samples come from K_n (not the fattened set) at a finer step than the fit."""
    z = samples.z[np.abs(samples.z - POLE) > 1e-12]
    ref = zeta(z, settings)
    sups = {name: float(np.abs(np.asarray(f(z)) - ref).max()) for name, f in _families(P, D)}
    metric = max(sups.values()) if sups else 0.0
    tol = 1.0 / n + settings.target_abs_error
    detail = {f"sup_{k}": v for k, v in sups.items()}
    detail["zeta_abs_range"] = [float(np.abs(ref).min()), float(np.abs(ref).max())]
    return PropertyResult(metric <= tol, metric, tol, detail)


def verify_P2(P, D, n: int) -> PropertyResult:
    errs = {name: abs(complex(np.asarray(f(np.array([POLE])))[0]) - n) for name, f in _families(P, D)}
    metric = float(max(errs.values())) if errs else 0.0
    return PropertyResult(metric <= INTERP_TOL, metric, INTERP_TOL,
                          {f"err_{k}": float(v) for k, v in errs.items()})


def _candidates(roots, K: CompactSet):
    locs = np.array([r.location for r in roots], dtype=complex)
    if locs.size == 0:
        return []
    keep = K.contains(locs, tol=TUBE) & in_tubes(locs)
    return [r for r, k in zip(roots, keep) if k]


def verify_P3(roots_P, roots_D, K: CompactSet, zc: ZeroClassification) -> PropertyResult:
    """Roots near the real axis or critical line inside K match Z^1 one-to-one."""
    failures = []
    worst = 0.0
    targets = list(zc.on_line_or_real)
    for name, roots in _families(roots_P, roots_D):
        for r in _candidates(roots, K):
            d = min((abs(r.location - a) for a in targets), default=np.inf)
            if d > TUBE:
                failures.append(f"{name}: unmatched zero at {r.location}")
            elif not r.simple:
                failures.append(f"{name}: zero at {r.location} is not simple")
        for a in targets:
            near = [r for r in roots if abs(r.location - a) <= TUBE]
            if len(near) != 1 or near[0].multiplicity != 1:
                failures.append(f"{name}: {len(near)} zeros matched to {a}")
            else:
                worst = max(worst, abs(near[0].location - a))
    return PropertyResult(not failures, float(worst), TUBE, {"failures": failures} if failures else {})


def _count_with_retry(f, rect: Rect) -> tuple[int, Rect]:
    for extra in (0.0, 0.5, 1.0, 2.0, 4.0):
        r = rect.inflate(extra * TUBE)
        try:
            return count_zeros(f, r), r
        except ContourTooClose:
            continue
    raise ContourTooClose(f"every contour near {rect} passes through a zero")


def verify_P4(P, D, roots_P, roots_D, K: CompactSet) -> PropertyResult:
    """No zeros of P or D in K off the tubes.

    Two checks: the root tables filtered by membership, and for every rect
    of K (inflated by the tube width) the argument-principle count must
    equal the number of tabulated roots inside it.
    """
    failures = []
    off_tube = 0
    for name, f, roots in (("P", P, roots_P), ("D", D, roots_D)):
        if f is None:
            continue
        locs = np.array([r.location for r in roots], dtype=complex)
        if locs.size:
            bad = K.contains(locs) & ~in_tubes(locs)
            off_tube += int(bad.sum())
            failures += [f"{name}: zero at {z} in K off the tubes" for z in locs[bad]]
        for rect in K.rects:
            count, used = _count_with_retry(f, rect.inflate(TUBE))
            tab = sum(r.multiplicity for r in roots if used.contains(r.location, tol=0.0))
            if count != tab:
                failures.append(f"{name}: argument principle counts {count} in {used}, table has {tab}")
    return PropertyResult(not failures, float(off_tube), 0.0, {"failures": failures} if failures else {})


def verify_P5(P, D, probes: np.ndarray) -> PropertyResult:
    failures = []
    worst = 0.0
    for name, f in _families(P, D):
        coeffs = getattr(f, "coeffs", None)
        if coeffs is None or np.iscomplexobj(coeffs):
            failures.append(f"{name}: coefficients are not real")
        v = np.asarray(f(probes.astype(complex)))
        ratio = np.abs(v.imag) / (1.0 + np.abs(v))
        worst = max(worst, float(ratio.max()))
    tol = 1e-13
    if worst > tol:
        failures.append(f"max |Im f(x)|/(1+|f(x)|) = {worst:.3e}")
    return PropertyResult(not failures, worst, tol, {"failures": failures} if failures else {})


def dirichlet_roots_on_K(D: DirichletPolynomial, K: CompactSet, scale: float | None = None):
    """Zeros of D in every (tube-inflated) rect of K, de-duplicated."""
    found: list[RootRecord] = []
    for rect in K.rects:
        for extra in (1.0, 1.5, 2.0, 3.0, 5.0):
            try:
                recs = dirichlet_roots_in(D, rect.inflate(extra * TUBE), scale)
                break
            except ContourTooClose:
                continue
        else:
            raise ContourTooClose(f"cannot place a contour around {rect}")
        for r in recs:
            if all(abs(r.location - s.location) > 1e-9 for s in found):
                found.append(r)
    found.sort(key=lambda r: (r.location.real, r.location.imag))
    return found


@dataclass
class VerificationReport:
    n: int
    properties: dict[str, PropertyResult]
    sup_error_P: float | None
    sup_error_D: float | None
    roots: dict[str, list[RootRecord]]
    budget: dict | None = None
    fits: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(p.passed for p in self.properties.values())

    def to_dict(self) -> dict:
        return {"n": self.n,
                "properties": {k: v.to_dict() for k, v in self.properties.items()},
                "all_passed": self.all_passed,
                "sup_error_P": self.sup_error_P, "sup_error_D": self.sup_error_D,
                "budget": self.budget, "fits": self.fits,
                "roots": {k: [r.to_dict() for r in v] for k, v in self.roots.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def verify_all(n: int, P: AlgebraicPolynomial | None, D: DirichletPolynomial | None,
               K: CompactSet, zc: ZeroClassification, verify_samples: Samples,
               probes: np.ndarray, scale_P: float | None = None, scale_D: float | None = None,
               settings: EvalSettings = DEFAULT_SETTINGS) -> VerificationReport:
    roots_P = poly_roots(P, scale_P) if P is not None else None
    roots_D = dirichlet_roots_on_K(D, K, scale_D) if D is not None else None
    p1 = verify_P1(P, D, verify_samples, n, settings)
    props = {"P1": p1, "P2": verify_P2(P, D, n), "P3": verify_P3(roots_P, roots_D, K, zc),
             "P4": verify_P4(P, D, roots_P, roots_D, K), "P5": verify_P5(P, D, probes)}
    roots = {k: v for k, v in (("P", roots_P), ("D", roots_D)) if v is not None}
    return VerificationReport(n, props, p1.detail.get("sup_P"), p1.detail.get("sup_D"), roots)
