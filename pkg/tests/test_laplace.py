import math

import mpmath as mp
import pytest

from infconc.errors import DomainError
from infconc.laplace import (
    LaplaceParams,
    deviation_probability,
    laplace_C,
    laplace_H,
    laplace_T,
    laplace_cdf,
)


def test_cdf_examples():
    assert laplace_cdf(LaplaceParams(0, 1), 0.0) == 0.5
    assert abs(laplace_cdf(LaplaceParams(0, 1), 700.0) - 1.0) <= 1e-15
    ref = float(mp.exp(mp.mpf(-1) / 3) / 2)
    assert laplace_cdf(LaplaceParams(2, 3), 1.0) == pytest.approx(ref, rel=1e-15)


def test_cdf_continuous_at_location():
    p = LaplaceParams(1.5, 0.7)
    left = laplace_cdf(p, math.nextafter(1.5, -math.inf))
    assert laplace_cdf(p, 1.5) == 0.5
    assert left == pytest.approx(0.5, abs=1e-15)


def test_cdf_nondecreasing():
    p = LaplaceParams(-1.0, 2.0)
    vals = [laplace_cdf(p, -30 + 0.01 * i) for i in range(6001)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("b", [0.0, -1.0, math.inf, math.nan])
def test_bad_scale(b):
    with pytest.raises(DomainError):
        LaplaceParams(0.0, b)


def test_moments():
    p = LaplaceParams(2.0, 3.0)
    assert p.mean == 2.0 and p.variance == 18.0


def test_C_values():
    assert laplace_C(1.0) == 0.5
    assert laplace_C(1.0 + 5e-13) == 0.5
    assert laplace_C(0.5) == 0.0
    assert laplace_C(2.0) == 0.0
    assert laplace_C(1.0 + 1e-9) == 0.0


def test_T_H_values():
    assert laplace_T(1.0) == pytest.approx(float(1 - mp.exp(-mp.sqrt(2))), rel=1e-15)
    assert laplace_T(2.0) == pytest.approx(0.940895, abs=1e-6)
    assert laplace_H(1.0) == pytest.approx(0.243117, abs=1e-6)
    assert laplace_H(2.0) == pytest.approx(0.059105, abs=1e-6)
    assert abs(laplace_T(1e-300)) <= 1e-290
    assert abs(laplace_H(1e-300) - 1.0) <= 1e-290


@pytest.mark.parametrize("f", [laplace_C, laplace_T, laplace_H])
@pytest.mark.parametrize("y", [0.0, -1.0, math.inf, math.nan])
def test_y_domain(f, y):
    with pytest.raises(DomainError):
        f(y)


def test_complementarity_grid():
    for i in range(100):
        y = 10 ** (-3 + 5 * i / 99)
        assert abs(laplace_T(y) + laplace_H(y) - 1.0) <= 1e-15


@pytest.mark.parametrize("y", [0.3, 1.0, 2.5])
def test_T_is_parameter_free(y):
    ref = deviation_probability(LaplaceParams(0.0, 1.0), y)
    for mu, b in [(2.0, 3.0), (-1.0, 0.5), (5.0, 0.25), (0.0, 7.0)]:
        assert abs(deviation_probability(LaplaceParams(mu, b), y) - ref) <= 1e-14
    assert abs(ref - laplace_T(y)) <= 1e-14
