import numpy as np
import pytest

from zetapprox.errors import CapExceeded, SingularGram
from zetapprox.fitting import (ConstraintFunctional, FitProblem, assemble_constraints, constraint_residuals,
                               fit_algebraic, fit_dirichlet, symmetrize, walsh_correction)
from zetapprox.geometry import Rect
from zetapprox.polynomials import AlgebraicPolynomial, DirichletPolynomial, arnoldi_hessenberg
from zetapprox.regions import CompactSet, ZeroClassification, sample_set
from zetapprox.target import ToleranceBudget
from zetapprox.zeta import zeta


class FnTarget:
    """Plain function target for synthetic fits."""

    def __init__(self, f):
        self.f = f

    def evaluate_samples(self, samples, conjugate=False):
        return self.f(samples.z)


@pytest.fixture(scope="module")
def box_samples():
    return sample_set(CompactSet((Rect(-1, 1, -1, 1),)), 0.1, 0.25)


@pytest.fixture(scope="module")
def right_box():
    return sample_set(CompactSet((Rect(2, 4, -2, 2),)), 0.05, 0.25)


def _basis(samples, degree):
    c, r = 0.0, float(np.abs(samples.z).max())
    h = arnoldi_hessenberg(samples.z / r, samples.weights, degree)
    return AlgebraicPolynomial(c, r, np.zeros(degree + 1), h)


def test_assemble_constraints_n1(ctx1, zero_table):
    cons = ctx1.constraints
    t1 = zero_table.t(1)
    assert [(c.kind, c.point, c.target) for c in cons] == [
        ("Eval", 1 + 0j, 1 + 0j), ("Eval", -2 + 0j, 0j), ("Deriv", -2 + 0j, 1 + 0j),
        ("Eval", 0.5 + 1j * t1, 0j), ("Deriv", 0.5 + 1j * t1, 1 + 0j)]
    assert sum(c.n_rows for c in cons) == 7


def test_assemble_constraints_off_line():
    b = 0.8 + 20j
    cons = assemble_constraints(2, ZeroClassification((), (b, np.conj(b))))
    assert cons[-1] == ConstraintFunctional("Eval", b, 0.5 + 0j)
    assert len(cons) == 2


def test_constraint_requires_upper_representative():
    with pytest.raises(ValueError):
        ConstraintFunctional("Eval", 1 - 2j, 0j)
    with pytest.raises(ValueError):
        ConstraintFunctional("Hess", 1 + 0j, 0j)


def test_constant_fit_at_cap_zero(box_samples):
    problem = FitProblem(box_samples, [], None, 0)
    p, rep = fit_algebraic(problem, FnTarget(lambda z: np.full(z.shape, 3.0 + 0j)))
    assert rep.achieved_degree == 0 and rep.sup_error <= 1e-7
    assert abs(p(0.3 + 0.2j) - 3.0) <= 1e-7


def test_linear_fit_with_constraints(box_samples):
    cons = [ConstraintFunctional("Eval", -0.5 + 0j, 1.5 + 0j), ConstraintFunctional("Deriv", -0.5 + 0j, 1 + 0j)]
    problem = FitProblem(box_samples, cons, ToleranceBudget(1.0, 1e-8), 4, (1, 2, 4))
    p, rep = fit_algebraic(problem, FnTarget(lambda z: z + 2))
    assert rep.achieved_degree == 1 and rep.sup_error <= 1e-8
    assert max(rep.constraint_residuals) <= 1e-12


def test_complex_constraint_counts_two_rows(box_samples):
    a = 0.2 + 0.3j
    cons = [ConstraintFunctional("Eval", a, 0j), ConstraintFunctional("Deriv", a, 1 + 0j)]
    assert FitProblem(box_samples, cons, None, 4).n_rows == 4


def test_dirichlet_tail_bound(right_box):
    tail = sum(m ** -2.0 for m in range(51, 10**6)) + 1e-6
    assert tail == pytest.approx(0.0198, abs=1e-3)
    problem = FitProblem(right_box, [], None, 50, (50,), "dirichlet")
    d, rep = fit_dirichlet(problem, FnTarget(zeta))
    assert rep.achieved_degree == 50
    assert rep.sup_error <= tail


def test_dirichlet_with_n1_constraints(right_box, ctx1):
    problem = FitProblem(right_box, ctx1.constraints, None, 50, (50,), "dirichlet")
    d, rep = fit_dirichlet(problem, FnTarget(zeta))
    assert max(rep.constraint_residuals) <= 1e-8
    assert d.is_real


def test_dirichlet_length_two_eval(right_box):
    problem = FitProblem(right_box, [ConstraintFunctional("Eval", 1 + 0j, 1 + 0j)], None, 2, (2,), "dirichlet")
    d, rep = fit_dirichlet(problem, FnTarget(zeta))
    assert abs(d(1.0 + 0j) - 1.0) <= 1e-12


def test_cap_exceeded_when_rows_outnumber_unknowns(ctx1):
    with pytest.raises(CapExceeded):
        FitProblem(ctx1.samples, ctx1.constraints, ctx1.budget, 5)
    with pytest.raises(CapExceeded):
        FitProblem(ctx1.samples, ctx1.constraints, ctx1.budget, 6, kind="dirichlet")
    assert FitProblem(ctx1.samples, ctx1.constraints, ctx1.budget, 6).sizes() == [6]


def test_walsh_algebraic_random_start(ctx1, rng):
    p = _basis(ctx1.samples, 10).with_coeffs(rng.standard_normal(11))
    before = constraint_residuals(p, ctx1.constraints)
    q = walsh_correction(p, ctx1.constraints)
    assert max(before) > 1e-3 and max(constraint_residuals(q, ctx1.constraints)) <= 1e-10


def test_walsh_dirichlet_random_start(ctx1, rng):
    d = DirichletPolynomial(rng.standard_normal(10))
    q = walsh_correction(d, ctx1.constraints)
    assert max(constraint_residuals(q, ctx1.constraints)) <= 1e-10


def test_walsh_explicit_sub_basis(rng):
    p = AlgebraicPolynomial.monomial(rng.standard_normal(4))
    cons = [ConstraintFunctional("Eval", -1 + 0j, 2 + 0j), ConstraintFunctional("Eval", 1 + 0j, 0j)]
    q = walsh_correction(p, cons, sub_basis=[2, 3])
    assert max(constraint_residuals(q, cons)) <= 1e-12
    assert np.array_equal(q.coeffs[:2], p.coeffs[:2])


def test_walsh_singular_gram():
    p = AlgebraicPolynomial.monomial(np.zeros(4))
    # u^2 and u^3 and their derivatives all vanish at u = 0
    cons = [ConstraintFunctional("Eval", 0j, 1 + 0j), ConstraintFunctional("Deriv", 0j, 1 + 0j)]
    with pytest.raises(SingularGram):
        walsh_correction(p, cons, sub_basis=[2, 3])


def test_walsh_without_constraints_is_identity():
    p = AlgebraicPolynomial.monomial([1.0, 2.0])
    assert walsh_correction(p, []) is p


def test_symmetrize():
    p = AlgebraicPolynomial.monomial(np.array([1 + 1j, 2 - 3j]))
    q = symmetrize(p)
    assert np.array_equal(q.coeffs, [1.0, 2.0]) and q.is_real
    z = 0.3 + 0.7j
    assert q(z) == pytest.approx(0.5 * (p(z) + np.conj(p(np.conj(z)))))


def test_lsq_objective_is_weighted_optimal(ctx1, box_samples):
    cons = [ConstraintFunctional("Eval", 0j, 1 + 0j)]
    problem = FitProblem(box_samples, cons, None, 6, (6,))
    target = FnTarget(np.exp)
    p, rep = fit_algebraic(problem, target, objective="lsq")
    w, f = box_samples.weights, np.exp(box_samples.z)

    def cost(q):
        return float(np.sum(w * np.abs(q(box_samples.z) - f) ** 2))

    base = cost(p)
    rng = np.random.default_rng(7)
    for _ in range(20):
        dq = rng.standard_normal(p.coeffs.size) * 1e-3
        trial = walsh_correction(p.with_coeffs(p.coeffs + dq), cons)
        assert cost(trial) >= base - 1e-14
    assert rep.objective == "lsq"


def test_minimax_beats_lsq_in_sup_norm(box_samples):
    problem = FitProblem(box_samples, [], None, 6, (6,))
    _, mm = fit_algebraic(problem, FnTarget(np.exp))
    _, ls = fit_algebraic(problem, FnTarget(np.exp), objective="lsq")
    assert mm.sup_error <= ls.sup_error * (1 + 1e-6)


def test_n1_fits_are_real_and_interpolate(fit_P1, fit_D1, ctx1):
    for poly, rep in (fit_P1, fit_D1):
        assert poly.is_real
        assert max(rep.constraint_residuals) <= 1e-8
        assert rep.strictly_decreasing
    P, rep = fit_P1
    z = ctx1.samples.z
    assert np.allclose(P(np.conj(z)), np.conj(P(z)), atol=1e-10 * np.abs(P(z)).max())


def test_report_dict_keys(fit_P1):
    d = fit_P1[1].to_dict()
    for key in ("sup_error_per_region", "constraint_residuals", "achieved_degree", "condition_diagnostic",
                "history", "cap_exceeded", "strictly_decreasing"):
        assert key in d
