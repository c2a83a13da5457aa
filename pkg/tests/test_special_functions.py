import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from infconc.errors import DomainError
from infconc.special_functions import (
    gauss_2f1,
    log_beta,
    log_gamma,
    log_gamma_ratio,
    normal_cdf,
    reg_inc_beta,
    student_t_cdf,
    t_central_tail,
    t_cdf_hypergeometric,
)

mp.mp.dps = 40


def rel(a, b):
    return abs(a - b) / abs(b)


# --- log gamma ---------------------------------------------------------------

def test_log_gamma_known_values():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
    assert log_gamma(10.0) == pytest.approx(math.log(math.factorial(9)), rel=1e-15)


@pytest.mark.parametrize("x", [0.5, 0.75, 1.5, 2.5, 7.3, 33.0, 1e3, 12345.6, 1e6])
def test_log_gamma_relative_accuracy(x):
    assert rel(log_gamma(x), float(mp.loggamma(mp.mpf(x)))) <= 1e-13


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, math.inf])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@pytest.mark.parametrize("x", [1.5, 10.0, 50.5, 6187.5, 5e5])
@pytest.mark.parametrize("d", [0.5, 1.0])
def test_log_gamma_ratio_matches_extended_precision(x, d):
    ref = mp.loggamma(mp.mpf(x) + mp.mpf(d)) - mp.loggamma(mp.mpf(x))
    assert rel(log_gamma_ratio(x, d), float(ref)) <= 1e-14


def test_log_beta_against_mpmath():
    for a, b in [(0.5, 1.5), (3.0, 0.5), (2500.0, 0.5), (1e5, 0.5)]:
        ref = mp.log(mp.beta(mp.mpf(a), mp.mpf(b)))
        assert abs(log_beta(a, b) - float(ref)) <= 1e-13 * max(1.0, abs(float(ref)))


# --- normal cdf ----------------------------------------------------------------

def test_normal_cdf_values():
    assert normal_cdf(0.0) == 0.5
    assert 2 * normal_cdf(1.0) - 1 == pytest.approx(0.6826, abs=1e-4)
    assert 2 - 2 * normal_cdf(3.0) == pytest.approx(0.002700, abs=1e-6)


@pytest.mark.parametrize("x", [-8.0, -3.0, -1.0, 0.3, 1.0, 2.0, 5.0])
def test_normal_cdf_absolute_accuracy(x):
    assert abs(normal_cdf(x) - float(mp.ncdf(mp.mpf(x)))) <= 1e-15


# --- incomplete beta -------------------------------------------------------------

def test_inc_beta_endpoints():
    assert reg_inc_beta(2.0, 3.0, 0.0) == 0.0
    assert reg_inc_beta(2.0, 3.0, 1.0) == 1.0


def test_inc_beta_against_direct_quadrature():
    b = math.exp(log_beta(0.5, 1.5))
    val, _ = integrate.quad(lambda t: t ** -0.5 * (1 - t) ** 0.5 / b, 0.0, 0.5,
                            epsabs=1e-13, epsrel=1e-13)
    assert abs(reg_inc_beta(0.5, 1.5, 0.5) - val) <= 1e-12


@pytest.mark.parametrize("a,b,x", [
    (0.5, 1.5, 0.5), (2.0, 3.0, 0.2), (2.0, 3.0, 0.9), (10.0, 0.5, 0.95),
    (1.5, 0.5, 0.999), (50.0, 0.5, 0.9), (0.5, 0.5, 1e-6), (300.0, 0.5, 0.99),
    (5000.0, 0.5, 0.999),
])
def test_inc_beta_relative_accuracy(a, b, x):
    ref = float(mp.betainc(mp.mpf(a), mp.mpf(b), 0, mp.mpf(x), regularized=True))
    assert rel(reg_inc_beta(a, b, x), ref) <= 1e-12


@pytest.mark.parametrize("args", [(0.0, 1.0, 0.5), (1.0, -1.0, 0.5), (1.0, 1.0, 1.5),
                                  (1.0, 1.0, -0.1)])
def test_inc_beta_domain(args):
    with pytest.raises(DomainError):
        reg_inc_beta(*args)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.2, 200.0), st.floats(0.2, 20.0), st.integers(0, 1 << 30))
def test_inc_beta_reflection(a, b, k):
    # dyadic x keeps 1 - x exact
    x = k / (1 << 30)
    assert abs(reg_inc_beta(a, b, x) + reg_inc_beta(b, a, 1.0 - x) - 1.0) <= 1e-13


# --- hypergeometric series ----------------------------------------------------------

def test_2f1_at_zero():
    assert gauss_2f1(0.3, 2.0, 1.7, 0.0) == 1.0


def _series_oracle(a, b, c, z, terms=200):
    a, b, c, z = (mp.mpf(t) for t in (a, b, c, z))
    s, t = mp.mpf(1), mp.mpf(1)
    for j in range(terms):
        t *= (a + j) * (b + j) / ((c + j) * (j + 1)) * z
        s += t
    return float(s)


def test_2f1_against_brute_force_series():
    assert rel(gauss_2f1(0.5, 2.0, 1.5, -0.25), _series_oracle(0.5, 2.0, 1.5, -0.25)) <= 1e-14


@pytest.mark.parametrize("a,b,c,z", [(0.5, 5.5, 1.5, -0.3), (0.5, 50.5, 1.5, -0.04),
                                     (1.2, 0.7, 2.5, 0.6), (0.5, 3.0, 1.5, -0.9)])
def test_2f1_against_mpmath(a, b, c, z):
    assert rel(gauss_2f1(a, b, c, z), float(mp.hyp2f1(a, b, c, z))) <= 1e-13


@pytest.mark.parametrize("b", [0.5, 1.0, 1.7, 2.5, 3.3, 5.0])
@pytest.mark.parametrize("z", [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9])
@pytest.mark.parametrize("a", [0.5, 2.0])
def test_2f1_degenerate_identity(a, b, z):
    assert rel(gauss_2f1(a, b, a, z), (1.0 - z) ** (-b)) <= 1e-12


@pytest.mark.parametrize("z", [1.0, -1.0, 1.5])
def test_2f1_outside_disk(z):
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 1.0, 1.5, z)


def test_2f1_nonpositive_integer_c():
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 1.0, -2.0, 0.3)


# --- Student t cdf --------------------------------------------------------------------

def test_t_cdf_examples():
    assert student_t_cdf(5.0, 0.0) == 0.5
    assert 2 - 2 * student_t_cdf(3.0, math.sqrt(3.0)) == pytest.approx(0.1817, abs=5e-5)
    assert 2 * student_t_cdf(7.0, 2.0 * math.sqrt(7.0 / 5.0)) - 1 == pytest.approx(0.9501, abs=5e-5)


def _t_oracle(v, x):
    v, x = mp.mpf(v), mp.mpf(x)
    tail = mp.betainc(v / 2, mp.mpf(1) / 2, 0, v / (v + x * x), regularized=True) / 2
    return float(1 - tail if x >= 0 else tail)


@pytest.mark.parametrize("v", [3, 4, 7, 30, 1000, 12375])
@pytest.mark.parametrize("x", [-5.0, -1.0, 0.4, 1.0, 2.0, 3.3, 10.0])
def test_t_cdf_against_extended_precision(v, x):
    assert abs(student_t_cdf(v, x) - _t_oracle(v, x)) <= 1e-14


def test_t_central_tail_small_tail_is_relative():
    central, tail = t_central_tail(3.0, 1e3)
    ref = float(mp.betainc(mp.mpf(1.5), 0.5, 0, mp.mpf(3) / (3 + mp.mpf(1e6)), regularized=True))
    assert rel(tail, ref) <= 1e-12
    assert central + tail == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("v", [2.9, 1.0, math.inf])
def test_t_cdf_domain(v):
    with pytest.raises(DomainError):
        student_t_cdf(v, 1.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(3.0, 1e5), st.floats(-50.0, 50.0))
def test_t_cdf_symmetry(v, x):
    assert abs(student_t_cdf(v, -x) + student_t_cdf(v, x) - 1.0) <= 1e-13


@pytest.mark.parametrize("v", [3, 5, 17, 400])
def test_t_cdf_monotone(v):
    xs = [-20 + 0.05 * i for i in range(801)]
    vals = [student_t_cdf(v, x) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("v", [3, 4, 5, 10, 50, 200, 1000])
def test_t_cdf_hypergeometric_route_agrees(v):
    for k in range(-9, 10):
        x = k / 10 * math.sqrt(0.9 * v)
        assert abs(student_t_cdf(v, x) - t_cdf_hypergeometric(v, x)) <= 1e-10


def test_hypergeometric_route_domain():
    with pytest.raises(DomainError):
        t_cdf_hypergeometric(3.0, 2.0)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 3.0])
def test_normal_limit(x):
    assert abs(student_t_cdf(1e6, x) - normal_cdf(x)) <= 1e-6
