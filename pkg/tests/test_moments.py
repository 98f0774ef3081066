import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eeptools import (
    LAMBDA_SWITCH,
    DomainError,
    EeParams,
    EepParams,
    FoxWrightSpec,
    ee_moment,
    ee_moment_gupta_kundu,
    ee_moment_quadrature,
    eep_chf,
    eep_chf_quadrature,
    eep_mean_variance,
    eep_mgf,
    eep_mgf_quadrature,
    eep_moment,
    eep_moment_double_series,
    eep_moment_quadrature,
    fox_wright_1psi1,
    log_gamma_complex,
)

from conftest import ALPHAS, BETAS, GRID, mp_expectation


# --- characteristic function ------------------------------------------------------

@pytest.mark.parametrize("a, b, lam", GRID)
def test_chf_at_zero_is_one(a, b, lam):
    v = eep_chf(EepParams(a, b, lam), 0.0)
    assert abs(v - 1.0) < 1e-12


@pytest.mark.parametrize("t", [0.5, 2.0, 7.0])
def test_chf_hermitian_symmetry(t):
    p = EepParams(1.7, 0.8, 3.0)
    assert eep_chf(p, -t) == eep_chf(p, t).conjugate()


def test_chf_example_against_extended_precision():
    p = EepParams(2.0, 1.0, 1.0)
    re = mp_expectation(p, lambda x: mpmath.cos(x))
    im = mp_expectation(p, lambda x: mpmath.sin(x))
    ref = complex(re, im)
    assert abs(eep_chf(p, 1.0) - ref) < 1e-12
    assert abs(eep_chf_quadrature(p, 1.0) - ref) < 1e-11


@pytest.mark.parametrize("a", ALPHAS)
@pytest.mark.parametrize("lam", [0.1, 5.0, 20.0, 30.0])
def test_chf_series_and_quadrature_agree(a, lam):
    p = EepParams(a, 1.3, lam)
    for t in (0.3, 1.3, 6.0, 13.0):
        assert abs(eep_chf(p, t) - eep_chf_quadrature(p, t)) < 1e-8


def test_chf_quadrature_at_zero_and_singular_alpha():
    assert abs(eep_chf_quadrature(EepParams(2, 1, 3), 0.0) - 1) < 1e-12
    v = eep_chf_quadrature(EepParams(0.5, 1, 3), 2.0)
    assert abs(v - eep_chf(EepParams(0.5, 1, 3), 2.0)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 6), st.floats(0.2, 5), st.floats(0.01, 25), st.floats(0.01, 40))
def test_chf_modulus_below_one(a, b, lam, t):
    v = eep_chf(EepParams(a, b, lam), t)
    assert abs(v) < 1.0


def test_large_lambda_routes_to_quadrature():
    p = EepParams(1.5, 1.0, 45.0)
    assert eep_chf(p, 2.0) == eep_chf_quadrature(p, 2.0)
    assert eep_moment(p, 1.0).value == eep_moment_quadrature(p, 1.0).value
    assert eep_mgf(p, 0.5) == eep_mgf_quadrature(p, 0.5)
    assert LAMBDA_SWITCH == 30.0


# --- transform M(t) = phi(i t) ---------------------------------------------------

def test_mgf_examples():
    p = EepParams(2.0, 1.0, 1.0)
    assert eep_mgf(p, 0.0) == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(DomainError, match="t must exceed -beta"):
        eep_mgf(p, -1.0)
    with pytest.raises(DomainError):
        eep_mgf(p, -1.5)
    assert eep_mgf(p, -0.999999) > 0


@pytest.mark.parametrize("a, b, lam", [(2, 1, 1), (0.5, 3, 5), (5, 0.5, 20), (1, 1, 0.1)])
def test_mgf_is_laplace_transform(a, b, lam):
    p = EepParams(a, b, lam)
    for t in (-b / 2, 0.5, b, 2 * b):
        ref = float(mp_expectation(p, lambda x: mpmath.exp(-t * x)))
        assert eep_mgf(p, t) == pytest.approx(ref, rel=1e-12)
        assert eep_mgf_quadrature(p, t) == pytest.approx(ref, rel=1e-11)


def test_mgf_is_chf_at_imaginary_argument():
    p = EepParams(2.3, 1.4, 4.0)
    for t in np.linspace(-0.69, 2.79, 9):
        s = complex(0.0, t)  # phi evaluated at i t
        tau = s / p.beta
        spec = FoxWrightSpec.confluent(p.alpha, p.alpha, 1 + p.alpha - 1j * tau, p.alpha, -p.lam)
        lg = log_gamma_complex(1 - 1j * tau)
        val = p.alpha * p.lam / -math.expm1(-p.lam) * np.exp(lg) * fox_wright_1psi1(spec).value
        assert eep_mgf(p, t) == pytest.approx(complex(val).real, rel=1e-10)


@pytest.mark.parametrize("a, b, lam", [(2, 1, 1), (0.5, 2, 5), (5, 0.5, 0.1)])
def test_mgf_finite_differences_give_moments(a, b, lam):
    p = EepParams(a, b, lam)
    h = 1e-4
    m_plus, m0, m_minus = eep_mgf(p, h), eep_mgf(p, 0.0), eep_mgf(p, -h)
    d1 = (m_plus - m_minus) / (2 * h)
    d2 = (m_plus - 2 * m0 + m_minus) / h ** 2
    m1 = eep_moment(p, 1.0).value
    m2 = eep_moment(p, 2.0).value
    # M(t) = E exp(-t xi): odd derivatives change sign
    assert -d1 == pytest.approx(m1, rel=1e-5)
    assert d2 == pytest.approx(m2, rel=1e-5)
    _, var = eep_mean_variance(p)
    assert d2 - d1 ** 2 == pytest.approx(var, rel=1e-4)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 5), st.floats(0.3, 3), st.floats(0.05, 20), st.floats(-0.45, 2.0))
def test_mgf_log_convex(a, b, lam, s):
    p = EepParams(a, b, lam)
    t, d = s * b, 0.05 * b
    lm = [math.log(eep_mgf(p, v)) for v in (t - d, t, t + d)]
    assert lm[0] + lm[2] - 2 * lm[1] >= -1e-12


# --- EE moments -------------------------------------------------------------------

@pytest.mark.parametrize("b", BETAS)
@pytest.mark.parametrize("nu", [0.3, 1.0, 2.5, 4.0])
def test_ee_exponential_case(b, nu):
    assert ee_moment(EeParams(1.0, b), nu) == pytest.approx(math.gamma(nu + 1) / b ** nu, rel=1e-12)


def test_ee_examples():
    assert ee_moment(EeParams(2.0, 1.0), 1.0) == pytest.approx(1.5, rel=1e-12)
    assert ee_moment_gupta_kundu(EeParams(2.0, 1.0), 1) == pytest.approx(1.5, rel=1e-12)
    assert ee_moment_gupta_kundu(EeParams(1.0, 2.0), 3) == pytest.approx(6 / 8, rel=1e-14)
    q = EeParams(2.5, 1.3)
    with mpmath.workdps(30):
        ref = mpmath.quad(lambda x: x ** 0.7 * 2.5 * 1.3 * mpmath.exp(-1.3 * x)
                          * (-mpmath.expm1(-1.3 * x)) ** 1.5, [0, 1, 10, mpmath.inf])
    assert ee_moment(q, 0.7) == pytest.approx(float(ref), rel=1e-12)
    assert ee_moment_quadrature(q, 0.7).value == pytest.approx(float(ref), rel=1e-11)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.5, 7.25])
@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_gupta_kundu_matches_closed_form(a, n):
    q = EeParams(a, 0.8)
    assert ee_moment_gupta_kundu(q, n) == pytest.approx(ee_moment(q, n), rel=1e-10)


def test_ee_domain():
    with pytest.raises(DomainError):
        ee_moment(EeParams(0.5, 1.0), 0.5)
    with pytest.raises(DomainError):
        ee_moment_gupta_kundu(EeParams(0.5, 1.0), 0)


# --- EEP moments --------------------------------------------------------------------

def test_eep_moment_small_lambda_limit():
    for a, nu in [(0.5, 1.0), (2.0, 2.5), (3.5, 0.4)]:
        eep = eep_moment(EepParams(a, 1.2, 1e-6), nu).value
        ee = ee_moment(EeParams(a, 1.2), nu)
        assert abs(eep / ee - 1) < 1e-5


@pytest.mark.parametrize("a, b, lam, nu", [(2, 1, 1, 1.0), (2, 1, 1, -0.5), (0.5, 3, 20, 1.5), (5, 0.5, 5, 0.2),
                                           (1, 1, 0.1, 3.0), (3.5, 2.0, 25, 2.2)])
def test_eep_moment_against_extended_precision(a, b, lam, nu):
    p = EepParams(a, b, lam)
    ref = float(mp_expectation(p, lambda x: x ** nu))
    r = eep_moment(p, nu)
    assert r.converged and r.value > 0
    assert r.value == pytest.approx(ref, rel=1e-12)
    assert abs(r.value - ref) <= r.abs_error_estimate + 4e-16 * ref


def test_eep_moment_domain():
    with pytest.raises(DomainError):
        eep_moment(EepParams(0.5, 1.0, 1.0), 0.5)
    # (-alpha, 1 - alpha] only through quadrature
    r = eep_moment_quadrature(EepParams(0.5, 1.0, 1.0), 0.3)
    assert r.converged and r.value > 0
    with pytest.raises(DomainError):
        eep_moment_quadrature(EepParams(0.5, 1.0, 1.0), -0.9)


def test_quadrature_exponential_limit():
    for nu in (0.5, 1.0, 3.0):
        r = eep_moment_quadrature(EepParams(1.0, 1.0, 1e-12), nu)
        assert r.value == pytest.approx(math.gamma(nu + 1), rel=1e-10)


@pytest.mark.parametrize("a, b, lam, n", [(1, 1, 1, 1), (2, 0.5, 2, 2), (0.5, 1, 5, 3), (3.5, 2, 10, 2),
                                          (1, 3, 20, 2), (0.7, 1, 0.1, 1)])
def test_double_series_matches_single_series(a, b, lam, n):
    p = EepParams(a, b, lam)
    assert eep_moment_double_series(p, n) == pytest.approx(eep_moment(p, n).value, rel=1e-10)


def test_double_series_truncation_is_flagged():
    r = eep_moment_double_series(EepParams(1.5, 1.0, 5.0), 1, m_max=3, full_output=True)
    assert not r.converged


def test_double_series_rejects_fractional_order():
    with pytest.raises(DomainError):
        eep_moment_double_series(EepParams(1, 1, 1), 1.5)


@pytest.mark.parametrize("a", [0.5, 2.0, 5.0])
@pytest.mark.parametrize("lam", [0.1, 5.0])
def test_moments_log_convex_in_order(a, lam):
    p = EepParams(a, 1.0, lam)
    nus = [v for v in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0) if v > 1 - a]
    m = {v: eep_moment(p, v).value for v in nus}
    for lo, mid, hi in zip(nus, nus[1:], nus[2:]):
        assert m[mid] ** 2 <= m[lo] * m[hi] * (1 + 1e-12)


def test_mean_variance_exponential_limit():
    mean, var = eep_mean_variance(EepParams(1.0, 1.0, 1e-6))
    assert mean == pytest.approx(1.0, rel=1e-5) and var == pytest.approx(1.0, rel=1e-5)
