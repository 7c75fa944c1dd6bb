"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import json
import time

import numpy as np
import pytest

from oracles import zero_ordinates_mp, zeta_functional_equation, zeta_partial_sum
from zetapprox.cli import main
from zetapprox.fitting import FitProblem, constraint_residuals, fit_dirichlet, walsh_correction
from zetapprox.geometry import Rect
from zetapprox.pipeline import build_context
from zetapprox.polynomials import AlgebraicPolynomial, DirichletPolynomial, arnoldi_hessenberg, \
    polynomial_from_dict
from zetapprox.regions import CompactSet, complement_connected, sample_set
from zetapprox.roots import RootRecord, count_zeros, dirichlet_roots_in, poly_roots
from zetapprox.verify import TUBE, verify_P3, verify_P4
from zetapprox.zeta import find_zero_ordinates, zeta

RESULTS: list[str] = []


def record(number: int, checks: dict[str, bool], info: str = "") -> None:
    """Print and keep one summary line, then fail on any unmet check."""
    failed = [k for k, ok in checks.items() if not ok]
    line = f"criterion {number}: {'PASS' if not failed else 'FAIL'}"
    if failed:
        line += " [unmet: " + ", ".join(failed) + "]"
    if info:
        line += f" ({info})"
    RESULTS.append(line)
    print(line)
    assert not failed, line


class FnTarget:
    def __init__(self, f):
        self.f = f

    def evaluate_samples(self, samples, conjugate=False):
        return self.f(samples.z)


def _roots(records):
    return [RootRecord(complex(r["re"], r["im"]), r["residual"], r["deriv_mag"], r["simple"],
                       r.get("multiplicity", 1)) for r in records]


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    """`run --n 1 --kind both` executed twice with the default seed."""
    out = []
    for name in ("first", "second"):
        d = tmp_path_factory.mktemp(name)
        t0 = time.perf_counter()
        code = main(["run", "--n", "1", "--kind", "both", "--out-dir", str(d)])
        out.append((d, code, time.perf_counter() - t0))
    return out


def test_criterion_1_zeta_engine():
    t0 = time.perf_counter()
    ref2, w2 = zeta_partial_sum(2.0)
    ref3, w3 = zeta_partial_sum(3.0)
    rng = np.random.default_rng(2024)
    s = rng.uniform(-10, 10, 1000) + 1j * rng.uniform(-100, 100, 1000)
    s = s[np.abs(s - 1) > 1e-6]
    x = rng.uniform(-10, 10, 1000)
    x = x[np.abs(x - 1) > 1e-6]
    tol = 1e-10
    checks = {
        "zeta(2)": abs(zeta(2.0) - 1.6449340668482264) <= 1e-9 and abs(zeta(2.0) - ref2) <= 1e-9 + w2,
        "zeta(3)": abs(zeta(3.0) - 1.2020569031595943) <= 1e-9 and abs(zeta(3.0) - ref3) <= 1e-9 + w3,
        "zeta(0)": abs(zeta(0.0) + 0.5) <= 1e-9 and abs(zeta(0.0) - zeta_functional_equation(0.0)) <= 1e-9,
        "zeta(-1)": abs(zeta(-1.0) + 1 / 12) <= 1e-9 and abs(zeta(-1.0) - zeta_functional_equation(-1.0)) <= 1e-9,
        "reflection": float(np.max(np.abs(zeta(np.conj(s)) - np.conj(zeta(s))))) <= 2 * tol,
        "realness": float(np.max(np.abs(zeta(x.astype(complex)).imag))) <= tol,
    }
    elapsed = time.perf_counter() - t0
    checks["runtime<10s"] = elapsed < 10
    record(1, checks, f"{elapsed:.1f}s")


def test_criterion_2_zero_table():
    t0 = time.perf_counter()
    table = find_zero_ordinates(30.0)
    ref = zero_ordinates_mp(3)
    count = count_zeros(zeta, Rect(-1, 2, 1, 30))
    elapsed = time.perf_counter() - t0
    record(2, {"three ordinates": len(table) == 3,
               "match oracle 1e-8": len(table) == 3 and np.allclose(table.ordinates, ref, atol=1e-8, rtol=0),
               "argument-principle count 3": count == 3,
               "runtime<60s": elapsed < 60}, f"{elapsed:.1f}s")


def test_criterion_3_geometry(zero_table, sets):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    checks = {}
    for i in (1, 2, 3):
        params, Q, zc, K, F = sets[i]
        step = params.min_gap() / 4
        checks[f"K_{i} connected complement"] = complement_connected(K, step, 1.0)
        checks[f"fat K_{i} connected complement"] = complement_connected(F, step, 1.0)
        for name, cset in (("K", K), ("fat K", F)):
            box = cset.bounding_box().inflate(1.0)
            z = rng.uniform(box.x0, box.x1, 10_000) + 1j * rng.uniform(box.y0, box.y1, 10_000)
            checks[f"{name}_{i} symmetry"] = bool(np.array_equal(cset.contains(z), cset.contains(np.conj(z))))
        s = sample_set(K, 0.05, 0.25)
        checks[f"K_{i} in K_{i + 1}"] = bool(np.all(sets[i + 1][3].contains(s.z)))
    elapsed = time.perf_counter() - t0
    checks["runtime<60s"] = elapsed < 60
    record(3, checks, f"{elapsed:.1f}s")


def test_criterion_4_interpolation_exactness(ctx1):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    cons = ctx1.constraints
    z = ctx1.samples.z
    r = float(np.abs(z - 0.25).max())
    h = arnoldi_hessenberg((z - 0.25) / r, ctx1.samples.weights, 10)
    P = AlgebraicPolynomial(0.25, r, rng.standard_normal(11), h)
    D = DirichletPolynomial(rng.standard_normal(10))
    before = max(max(constraint_residuals(P, cons)), max(constraint_residuals(D, cons)))
    after_P = max(constraint_residuals(walsh_correction(P, cons), cons))
    after_D = max(constraint_residuals(walsh_correction(D, cons), cons))
    elapsed = time.perf_counter() - t0
    record(4, {"random start > 1e-3": before > 1e-3, "algebraic <= 1e-10": after_P <= 1e-10,
               "dirichlet <= 1e-10": after_D <= 1e-10, "runtime<5s": elapsed < 5},
           f"algebraic {after_P:.1e}, dirichlet {after_D:.1e}")


def test_criterion_5_algebraic_properties(runs, sets):
    out, code, elapsed = runs[0]
    params, Q, zc, K, F = sets[1]
    doc = json.loads((out / "algebraic_n1.json").read_text())
    report = json.loads((out / "report_n1.json").read_text())
    P = polynomial_from_dict(doc["polynomial"])
    fit = doc["fit"]
    roots = _roots(report["roots"]["P"])
    p3 = verify_P3(roots, None, K, zc)
    p4 = verify_P4(P, None, roots, None, K)
    probes = np.random.default_rng(0).uniform(-2, 3, 1000).astype(complex)
    v = P(probes)
    sup = report["sup_error_P"]
    eps = fit["epsilon"]
    within = sup <= eps <= 1
    fallback = fit["cap_exceeded"] and fit["strictly_decreasing"]
    off = int(sum(1 for r in roots if bool(K.contains(r.location)) and abs(r.location.imag) > TUBE
                  and abs(r.location.real - 0.5) > TUBE))
    record(5, {
        "(a) residuals <= 1e-8": max(fit["constraint_residuals"]) <= 1e-8,
        "(a) P(1) = 1": report["properties"]["P2"]["detail"]["err_P"] <= 1e-8,
        "(b) sup <= eps_1 or monotone escalation with CapExceeded": within or fallback,
        "(c) one simple root per zeta zero and none off the tubes": p3.passed and p4.passed,
        "(d) real on the real axis": bool(np.all(np.abs(v.imag) <= 1e-13 * (1 + np.abs(v)))),
        "runtime<10min": elapsed < 600,
    }, f"sup {sup:.4g} vs eps {eps:.4g}, degree {fit['achieved_degree']}, "
       f"{off} roots in K_1 off the tubes, run {elapsed:.0f}s")


def test_criterion_6_dirichlet(runs, ctx1):
    t0 = time.perf_counter()
    samples = sample_set(CompactSet((Rect(2, 4, -2, 2),)), 0.05, 0.25)
    tail = sum(m ** -2.0 for m in range(51, 10**6)) + 1 / 10**6
    _, free = fit_dirichlet(FitProblem(samples, [], None, 50, (50,), "dirichlet"), FnTarget(zeta))
    _, tied = fit_dirichlet(FitProblem(samples, ctx1.constraints, None, 50, (50,), "dirichlet"), FnTarget(zeta))
    out, code, run_time = runs[0]
    doc = json.loads((out / "dirichlet_n1.json").read_text())
    report = json.loads((out / "report_n1.json").read_text())
    fit = doc["fit"]
    D = polynomial_from_dict(doc["polynomial"])
    probes = np.random.default_rng(0).uniform(-2, 3, 1000).astype(complex)
    v = D(probes)
    elapsed = time.perf_counter() - t0 + run_time
    record(6, {
        "M=50 sup <= tail bound": free.sup_error <= tail,
        "M=50 with constraints residuals <= 1e-8": max(tied.constraint_residuals) <= 1e-8,
        "D_1 P2": report["properties"]["P2"]["detail"]["err_D"] <= 1e-8,
        "D_1 P3 at constraints": max(fit["constraint_residuals"]) <= 1e-8,
        "D_1 P5": D.is_real and bool(np.all(np.abs(v.imag) <= 1e-13 * (1 + np.abs(v)))),
        "D_1 monotone escalation": fit["strictly_decreasing"] and len(fit["history"]) > 1,
        "runtime<10min": elapsed < 600,
    }, f"M=50 sup {free.sup_error:.3g} vs tail {tail:.4f}, D_1 sup {report['sup_error_D']:.4g} "
       f"at M={fit['achieved_degree']}")


def test_criterion_7_zero_finder(runs, sets):
    d = DirichletPolynomial(np.array([1.0, -2.0]))
    dr = [r.location for r in dirichlet_roots_in(d, Rect(0, 2, -12, 12))]
    want = [1 + 0j, 1 + 2j * np.pi / np.log(2), 1 - 2j * np.pi / np.log(2)]
    quad = [r.location for r in poly_roots(AlgebraicPolynomial.monomial([1.0, 0.0, 1.0]))]
    cubic = [r.location for r in poly_roots(AlgebraicPolynomial.monomial([6.0, -5.0, -2.0, 1.0]))]

    def near_all(got, expected, tol):
        return len(got) == len(expected) and all(min(abs(g - e) for g in got) <= tol for e in expected)

    def closed(locs):
        return all(min(abs(w - np.conj(z)) for w in locs) <= 1e-8 * max(1, abs(z)) for z in locs)

    report = json.loads((runs[0][0] / "report_n1.json").read_text())
    K = sets[1][3]
    tables = {k: _roots(v) for k, v in report["roots"].items()}
    P = polynomial_from_dict(json.loads((runs[0][0] / "algebraic_n1.json").read_text())["polynomial"])
    D = polynomial_from_dict(json.loads((runs[0][0] / "dirichlet_n1.json").read_text())["polynomial"])
    count_failures = [f for f in verify_P4(P, D, tables["P"], tables["D"], K).detail.get("failures", [])
                      if "argument principle" in f]
    record(7, {
        "1 - 2*2^-z roots 1e-9": near_all(dr, want, 1e-9),
        "z^2+1 roots 1e-10": near_all(quad, [1j, -1j], 1e-10),
        "cubic roots 1e-10": near_all(cubic, [1, -2, 3], 1e-10),
        "conjugate-closed tables": all(closed([r.location for r in t]) for t in tables.values())
        and closed(dr) and closed(quad) and closed(cubic),
        "count-consistent tables": not count_failures,
    }, f"{len(tables['P'])} roots of P_1, {len(tables['D'])} roots of D_1 on K_1")


def test_criterion_8_determinism(runs):
    (a, code_a, _), (b, code_b, _) = runs
    ra, rb = (a / "report_n1.json").read_bytes(), (b / "report_n1.json").read_bytes()
    record(8, {"identical report bytes": ra == rb, "same exit code": code_a == code_b},
           f"exit code {code_a}, {len(ra)} bytes")
