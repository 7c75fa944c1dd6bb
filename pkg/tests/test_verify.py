import numpy as np
import pytest

from zetapprox.polynomials import AlgebraicPolynomial
from zetapprox.roots import RootRecord, poly_roots
from zetapprox.verify import (in_tubes, verify_P1, verify_P2, verify_P3, verify_P4, verify_P5)
from zetapprox.zeta import zeta


def _with_roots(roots, radius=20.0):
    """Real monomial-frame polynomial with the given roots (conjugates added by the caller)."""
    coeffs = np.real(np.poly(np.asarray(roots) / radius))[::-1]
    return AlgebraicPolynomial.monomial(coeffs, radius=radius)


@pytest.fixture(scope="module")
def k1(sets):
    params, Q, zc, K, F = sets[1]
    return K, zc


@pytest.fixture(scope="module")
def exact_zeros_poly(k1):
    return _with_roots(k1[1].on_line_or_real)


def test_in_tubes():
    assert np.array_equal(in_tubes(np.array([3 + 5e-5j, 0.50009 + 7j, 1.2 + 16j])), [True, True, False])


def test_P1_zeta_itself_passes(ctx1):
    res = verify_P1(zeta, None, ctx1.samples, 1)
    assert res.passed and res.metric == 0.0


def test_P1_zero_function_fails(ctx1):
    res = verify_P1(lambda z: np.zeros(np.shape(z), dtype=complex), None, ctx1.samples, 1)
    assert not res.passed and res.metric > 1


def test_P2_passes_and_shift_fails(fit_D1):
    D = fit_D1[0]
    assert verify_P2(None, D, 1).passed
    c = D.coeffs.copy()
    c[0] += 1e-6
    res = verify_P2(None, D.with_coeffs(c), 1)
    assert not res.passed and res.metric == pytest.approx(1e-6, rel=1e-3)


def test_P3_and_P4_pass_for_exact_zero_polynomial(k1, exact_zeros_poly):
    K, zc = k1
    roots = poly_roots(exact_zeros_poly)
    assert verify_P3(roots, None, K, zc).passed
    assert verify_P4(exact_zeros_poly, None, roots, None, K).passed


def test_P3_doubled_root_fails(k1):
    K, zc = k1
    roots = [RootRecord(a, 0.0, 1.0, True) for a in zc.on_line_or_real]
    doubled = roots + [RootRecord(-2 + 1e-6j, 0.0, 1.0, True)]
    assert verify_P3(roots, None, K, zc).passed
    assert not verify_P3(doubled, None, K, zc).passed


def test_P3_shifted_or_non_simple_root_fails(k1):
    K, zc = k1
    roots = [RootRecord(a, 0.0, 1.0, True) for a in zc.on_line_or_real]
    shifted = [RootRecord(-2.001 + 0j, 0.0, 1.0, True)] + roots[1:]
    assert not verify_P3(shifted, None, K, zc).passed
    flat = [RootRecord(-2 + 0j, 0.0, 0.0, False)] + roots[1:]
    assert not verify_P3(flat, None, K, zc).passed


def test_P4_injected_zero_pair_fails(k1):
    K, zc = k1
    b = 1.2 + 16j
    assert K.contains(b)
    P = _with_roots(list(zc.on_line_or_real) + [b, np.conj(b)])
    roots = poly_roots(P)
    res = verify_P4(P, None, roots, None, K)
    assert not res.passed and res.metric == 2.0
    assert verify_P3(roots, None, K, zc).passed


def test_P4_count_mismatch_detected(k1, exact_zeros_poly):
    K, zc = k1
    roots = poly_roots(exact_zeros_poly)
    res = verify_P4(exact_zeros_poly, None, roots[1:], None, K)
    assert not res.passed
    assert any("argument principle" in f for f in res.detail["failures"])


def test_P5_complex_coefficients_fail(rng):
    probes = rng.uniform(-3, 3, 100)
    real = AlgebraicPolynomial.monomial(np.array([1.0, 2.0, 3.0]))
    cplx = AlgebraicPolynomial.monomial(np.array([1.0, 2.0 + 1e-3j, 3.0]))
    assert verify_P5(real, None, probes).passed
    res = verify_P5(cplx, None, probes)
    assert not res.passed and res.metric > 1e-13


def test_P5_fitted_pair(fit_P1, fit_D1, rng):
    res = verify_P5(fit_P1[0], fit_D1[0], rng.uniform(-2, 3, 1000))
    assert res.passed and res.metric <= 1e-13
