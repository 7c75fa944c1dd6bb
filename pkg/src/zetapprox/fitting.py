"""Constrained fitting of real-coefficient algebraic and Dirichlet polynomials.

Both fitters work the same way. The interpolation constraints are
eliminated exactly and the remaining freedom goes to the approximation
objective. A final Walsh-Deutsch style correction puts the constraint
residuals at linear-solve accuracy.

The default objective is the discrete minimax error over the samples,
solved as a second-order cone program. Its optimum cannot increase as
the basis grows, which ordinary least squares does not guarantee for the
sup error. objective="lsq" gives the weighted least-squares solution.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import cvxpy as cp
import numpy as np

from .errors import CapExceeded, IllConditioned, SingularGram
from .polynomials import AlgebraicPolynomial, DirichletPolynomial, arnoldi_hessenberg
from .regions import POLE, Samples, ZeroClassification
from .target import ToleranceBudget

log = logging.getLogger(__name__)

ALGEBRAIC_SCHEDULE = (16, 24, 32, 48, 64, 96, 128)
DIRICHLET_SCHEDULE = (25, 50, 100, 200, 400)
ILL_CONDITIONED = 1e12
COEFF_BOX = 1e6


@dataclass(frozen=True)
class ConstraintFunctional:
    kind: str  # "Eval" or "Deriv"
    point: complex
    target: complex

    def __post_init__(self):
        if self.kind not in ("Eval", "Deriv"):
            raise ValueError(f"unknown functional kind {self.kind!r}")
        if self.point.imag < 0:
            raise ValueError("store the Im >= 0 representative only")

    @property
    def n_rows(self) -> int:
        return 2 if self.point.imag != 0 else 1

    def apply(self, p) -> complex:
        z = np.array([self.point])
        return complex((p(z) if self.kind == "Eval" else p.derivative(z))[0])

    def to_dict(self) -> dict:
        return {"kind": self.kind, "point": [self.point.real, self.point.imag],
                "target": [self.target.real, self.target.imag]}


def assemble_constraints(n: int, zc: ZeroClassification) -> list[ConstraintFunctional]:
    out = [ConstraintFunctional("Eval", POLE, complex(n))]
    for a in zc.on_line_or_real:
        if a.imag >= 0:
            out += [ConstraintFunctional("Eval", a, 0j), ConstraintFunctional("Deriv", a, 1 + 0j)]
    for b in zc.off_line:
        if b.imag >= 0:
            out.append(ConstraintFunctional("Eval", b, complex(1.0 / n)))
    return out


def constraint_rows(constraints, basis_values) -> tuple[np.ndarray, np.ndarray]:
    """Stacked real system C x = d; basis_values(points, derivative) -> rows."""
    rows, rhs = [], []
    for c in constraints:
        q, dq = basis_values(np.array([c.point]), c.kind == "Deriv")
        row = (q if c.kind == "Eval" else dq)[0]
        rows.append(row.real)
        rhs.append(c.target.real)
        if c.point.imag != 0:
            rows.append(row.imag)
            rhs.append(c.target.imag)
    if not rows:
        return np.zeros((0, 0)), np.zeros(0)
    return np.array(rows), np.array(rhs)


def constraint_residuals(p, constraints) -> list[float]:
    return [abs(c.apply(p) - c.target) for c in constraints]


def walsh_correction(p, constraints, sub_basis=None):
    """Return p + sum_j c_j e_j meeting every constraint exactly.

    e_j runs over sub_basis (default: the lowest-index basis elements, one
    per real constraint row). Raises SingularGram when the Gram block is
    singular to working precision.
    """
    if not constraints:
        return p
    coeffs = np.array(p.coeffs, dtype=float)
    C, d = constraint_rows(constraints, p.basis_values)
    idx = np.arange(C.shape[0]) if sub_basis is None else np.asarray(sub_basis)
    if idx.size != C.shape[0] or idx.max() >= coeffs.size:
        raise SingularGram(f"need {C.shape[0]} correction elements within {coeffs.size} coefficients")
    gram = C[:, idx]
    if not np.all(np.isfinite(gram)) or np.linalg.cond(gram) > 1e14:
        raise SingularGram("constraint Gram block is singular; choose another sub-basis")
    resid = d - C @ coeffs
    coeffs[idx] += np.linalg.solve(gram, resid)
    return p.with_coeffs(coeffs)


def symmetrize(p):
    """(P(z) + conj P(conj z))/2, i.e. the real part of the coefficients."""
    return p.with_coeffs(np.real(np.asarray(p.coeffs)).astype(float))


@dataclass
class FitProblem:
    samples: Samples
    constraints: list[ConstraintFunctional]
    budget: ToleranceBudget | None
    cap: int
    schedule: tuple[int, ...] = ALGEBRAIC_SCHEDULE
    kind: str = "algebraic"

    def __post_init__(self):
        if self.kind not in ("algebraic", "dirichlet"):
            raise ValueError(f"unknown fit kind {self.kind!r}")
        if self.cap < (0 if self.kind == "algebraic" else 1):
            raise ValueError("cap too small")
        if self.n_rows > self.unknowns(self.cap):
            raise CapExceeded(f"{self.n_rows} constraint rows do not fit in {self.unknowns(self.cap)} "
                              f"coefficients (cap {self.cap})")

    @property
    def n_rows(self) -> int:
        return sum(c.n_rows for c in self.constraints)

    def unknowns(self, size: int) -> int:
        return size + 1 if self.kind == "algebraic" else size

    def sizes(self) -> list[int]:
        steps = [s for s in self.schedule if s <= self.cap and self.unknowns(s) >= self.n_rows]
        return steps or [self.cap]


@dataclass
class FitReport:
    kind: str
    sup_error_per_region: dict[str, float]
    constraint_residuals: list[float]
    achieved_degree: int
    condition_diagnostic: float
    sup_error: float
    epsilon: float | None
    history: list[tuple[int, float]] = field(default_factory=list)
    cap_exceeded: bool = False
    objective: str = "minimax"
    solver_fallbacks: list[int] = field(default_factory=list)

    @property
    def within_budget(self) -> bool:
        return self.epsilon is not None and self.sup_error <= self.epsilon

    @property
    def strictly_decreasing(self) -> bool:
        errs = [e for _, e in self.history]
        return all(b < a for a, b in zip(errs, errs[1:]))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "achieved_degree": self.achieved_degree,
                "sup_error": self.sup_error, "epsilon": self.epsilon,
                "within_budget": self.within_budget, "cap_exceeded": self.cap_exceeded,
                "sup_error_per_region": self.sup_error_per_region,
                "constraint_residuals": self.constraint_residuals,
                "condition_diagnostic": self.condition_diagnostic,
                "history": [{"size": d, "sup_error": e} for d, e in self.history],
                "strictly_decreasing": self.strictly_decreasing,
                "objective": self.objective, "solver_fallbacks": self.solver_fallbacks}


# ------------------------------------------------------------------ solvers

def _minimax(A: np.ndarray, f: np.ndarray, eq=None, box: float | None = None) -> np.ndarray | None:
    """min_x max_i |A x - f|_i over real x (SOCP); None if the solver fails."""
    x = cp.Variable(A.shape[1])
    t = cp.Variable()
    resid = cp.vstack([A.real @ x - f.real, A.imag @ x - f.imag])
    cons = [cp.norm(resid, 2, axis=0) <= t]
    if eq is not None and eq[0].size:
        cons.append(eq[0] @ x == eq[1])
    if box is not None:
        cons.append(cp.abs(x) <= box)
    try:
        cp.Problem(cp.Minimize(t), cons).solve(solver=cp.CLARABEL)
    except cp.error.SolverError as exc:
        log.warning("minimax solve failed: %s", exc)
        return None
    if x.value is None or not np.all(np.isfinite(x.value)):
        return None
    return np.asarray(x.value, dtype=float)


def _stack(A, f, w):
    sw = np.sqrt(w)
    Aw, fw = sw[:, None] * A, sw * f
    return np.vstack([Aw.real, Aw.imag]), np.concatenate([fw.real, fw.imag])


def _nullspace_lsq(A, f, w, C, d) -> np.ndarray:
    """Weighted least squares subject to C x = d by the null-space method."""
    M, b = _stack(A, f, w)
    if C.size == 0:
        return np.linalg.lstsq(M, b, rcond=None)[0]
    m = C.shape[0]
    Q, R = np.linalg.qr(C.T, mode="complete")
    x0 = Q[:, :m] @ np.linalg.solve(R[:m, :m].T, d)
    N = Q[:, m:]
    if N.shape[1] == 0:
        return x0
    z = np.linalg.lstsq(M @ N, b - M @ x0, rcond=None)[0]
    return x0 + N @ z


def _errors(p, samples: Samples, f: np.ndarray):
    err = np.abs(p(samples.z) - f)
    per_region = {}
    for r, tag in enumerate(samples.tags):
        sel = samples.region == r
        per_region[str(tag)] = float(err[sel].max())
    return float(err.max()), per_region


def _upper(samples: Samples) -> np.ndarray:
    return samples.z.imag >= 0


# ---------------------------------------------------------------- algebraic

def algebraic_frame(z: np.ndarray) -> tuple[float, float]:
    c = 0.5 * (z.real.min() + z.real.max())
    return float(c), float(max(np.abs(z - c).max(), 1e-300))


def fit_algebraic(problem: FitProblem, target, objective: str = "minimax"):
    """Fit P in an Arnoldi-orthonormalized basis, escalating the degree."""
    samples = problem.samples
    f = target.evaluate_samples(samples)
    eps = problem.budget.epsilon if problem.budget else None
    sizes = problem.sizes()
    c, r = algebraic_frame(samples.z)
    u = (samples.z - c) / r
    hess = arnoldi_hessenberg(u, samples.weights, max(sizes))
    full = AlgebraicPolynomial(c, r, np.zeros(max(sizes) + 1), hess)
    basis_all, _ = full.basis_values(samples.z)
    sw = np.sqrt(samples.weights / samples.weights.sum())
    upper = _upper(samples)

    history, fallbacks = [], []
    best = None
    for deg in sizes:
        template = full.truncated_basis(deg)
        A = basis_all[:, :deg + 1]
        cond = float(np.linalg.cond(sw[:, None] * A))
        if cond > ILL_CONDITIONED:
            raise IllConditioned(f"orthonormalized basis has condition {cond:.2e} at degree {deg}")
        C, d = constraint_rows(problem.constraints, template.basis_values)
        x = None
        if objective == "minimax":
            x = _minimax(A[upper], f[upper], (C, d))
            if x is None:
                fallbacks.append(deg)
        if x is None:
            x = _nullspace_lsq(A, f, samples.weights, C, d)
        p = walsh_correction(template.with_coeffs(x), problem.constraints)
        sup, per_region = _errors(p, samples, f)
        history.append((deg, sup))
        log.info("algebraic degree %d: sup error %.6g", deg, sup)
        best = (p, sup, per_region, cond, deg)
        if eps is not None and sup <= eps:
            break
    p, sup, per_region, cond, deg = best
    report = FitReport("algebraic", per_region, constraint_residuals(p, problem.constraints), deg,
                       cond, sup, eps, history, eps is not None and sup > eps, objective, fallbacks)
    return p, report


# ---------------------------------------------------------------- dirichlet

def fit_dirichlet(problem: FitProblem, target, objective: str = "minimax", box: float = COEFF_BOX):
    """Fit D(z) = sum a_m m^{-z}, escalating the length M.

    The first (number of constraint rows) coefficients are eliminated
    through the constraint block, the rest are column-scaled and bounded
    by box in the scaled variables, which keeps the nearly dependent
    exponentials from producing huge cancelling coefficients.
    """
    samples = problem.samples
    f = target.evaluate_samples(samples)
    eps = problem.budget.epsilon if problem.budget else None
    upper = _upper(samples)
    history, fallbacks = [], []
    best = None
    for M in problem.sizes():
        template = DirichletPolynomial(np.zeros(M))
        V, _ = template.basis_values(samples.z)
        C, d = constraint_rows(problem.constraints, template.basis_values)
        m = C.shape[0]
        if m:
            G = C[:, :m]
            cond = float(np.linalg.cond(G))
            if cond > ILL_CONDITIONED:
                raise IllConditioned(f"constraint block has condition {cond:.2e}")
            Gi_rest = np.linalg.solve(G, C[:, m:])
            Gi_d = np.linalg.solve(G, d)
            design = V[:, m:] - V[:, :m] @ Gi_rest
            offset = V[:, :m] @ Gi_d
        else:
            cond, design, offset = 1.0, V, np.zeros(V.shape[0], dtype=complex)
            Gi_rest, Gi_d = np.zeros((0, M)), np.zeros(0)
        if design.shape[1]:
            scale = np.abs(design).max(axis=0)
            scale[scale == 0] = 1.0
            scaled = design / scale
            b = None
            if objective == "minimax":
                b = _minimax(scaled[upper], (f - offset)[upper], box=box)
                if b is None:
                    fallbacks.append(M)
            if b is None:
                Mw, rhs = _stack(scaled, f - offset, samples.weights)
                b = np.linalg.lstsq(Mw, rhs, rcond=1e-12)[0]
            rest = b / scale
        else:
            rest = np.zeros(0)
        coeffs = np.concatenate([Gi_d - Gi_rest @ rest, rest]) if m else rest
        p = walsh_correction(template.with_coeffs(coeffs), problem.constraints)
        sup, per_region = _errors(p, samples, f)
        history.append((M, sup))
        log.info("dirichlet length %d: sup error %.6g", M, sup)
        best = (p, sup, per_region, cond, M)
        if eps is not None and sup <= eps:
            break
    p, sup, per_region, cond, M = best
    report = FitReport("dirichlet", per_region, constraint_residuals(p, problem.constraints), M,
                       cond, sup, eps, history, eps is not None and sup > eps, objective, fallbacks)
    return p, report
