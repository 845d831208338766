import math

import mpmath
import numpy as np
import pytest
from mpmath import mpf
from scipy import integrate, special

from bellcert.exceptions import LambertDomainError, ValidityError
from bellcert.lambert_w import (
    exp_w,
    first_index_with_w_at_least,
    lambert_w,
    log_sandwich,
    omega,
    w_derivative,
    w_integral,
    w_of,
)
from bellcert.precision import HPReal

OMEGA = 0.5671432904097838
PREC = 192


def test_omega_constant():
    value = omega(PREC)
    assert abs(float(value) - OMEGA) < 1e-15
    assert value.is_tight()


def test_residual_is_within_tolerance():
    for x in (1, "0.001", 10, 742, 10 ** 6):
        result = lambert_w(x, PREC)
        assert result.residual.hi <= result.tolerance


def test_matches_scipy_on_log_grid():
    previous = -1.0
    for x in np.logspace(-3, 6, 40):
        w = float(w_of(float(x), PREC))
        assert w == pytest.approx(special.lambertw(x).real, rel=1e-12)
        assert w > previous
        previous = w


def test_zero_and_negative_arguments():
    assert w_of(0, PREC).contains(0)
    assert float(exp_w(0, PREC)) == 1.0
    with pytest.raises(LambertDomainError):
        lambert_w(-1)
    with pytest.raises(LambertDomainError):
        lambert_w("-0.1")


def test_exp_w_is_x_over_w():
    for x in (1, 10, 1000):
        assert float(exp_w(x, PREC)) == pytest.approx(math.exp(special.lambertw(x).real), rel=1e-12)


def test_threshold_of_w_at_five():
    assert w_of(742, PREC).hi < 5
    assert w_of(743, PREC).lo > 5
    assert first_index_with_w_at_least(5, shift=1) == 742
    assert first_index_with_w_at_least(5, shift=0) == 743


def test_integral_matches_quadrature():
    for x in (1, 10, 1000):
        expected, _ = integrate.quad(lambda t: special.lambertw(t).real, 0, x,
                                     epsabs=0, epsrel=1e-13, limit=200)
        assert float(w_integral(x, PREC)) == pytest.approx(expected, rel=1e-10)


def test_derivative_at_one():
    assert float(w_derivative(1, PREC)) == pytest.approx(OMEGA / (1 + OMEGA), rel=1e-14)


def test_log_sandwich_brackets_w():
    for x in (3, 10, 10 ** 5):
        lower, upper = log_sandwich(x, PREC)
        w = w_of(x, PREC)
        assert lower.hi <= w.lo
        assert w.hi <= upper.lo


def test_log_sandwich_needs_x_at_least_e():
    with pytest.raises(ValidityError):
        log_sandwich(2, PREC)


def test_interval_argument_gives_wider_enclosure():
    x = HPReal.exact(10, PREC) + HPReal(mpf("-1e-30"), mpf("1e-30"), PREC)
    result = lambert_w(x, PREC)
    assert result.w.contains(w_of(10, PREC))
    assert result.residual.hi <= result.tolerance


def test_omega_matches_bisection_to_forty_digits():
    with mpmath.workdps(60):
        lo, hi = mpmath.mpf(0), mpmath.mpf(1)
        for _ in range(200):
            mid = (lo + hi) / 2
            if mid * mpmath.exp(mid) < 1:
                lo = mid
            else:
                hi = mid
        assert abs(omega(PREC).value - lo) < mpmath.mpf(10) ** -40


def test_residual_bound_on_short_grid():
    for x in np.logspace(-6, 12, 200):
        result = lambert_w(float(x), PREC)
        assert result.residual.hi <= max(float(x), 1.0) * 2.0 ** -160


@pytest.mark.slow
def test_residual_bound_on_full_grid():
    grid = np.concatenate(([0.0], np.logspace(-12, 12, 9999)))
    for x in grid:
        result = lambert_w(float(x), PREC)
        assert result.residual.hi <= max(float(x), 1.0) * 2.0 ** -160


GRID = [0.05, 0.3, 1, 2.5, 7, 20, 100, 1000, 10 ** 5, 10 ** 8]


def test_w_is_concave_on_a_grid():
    points = [HPReal.exact(x, PREC) for x in np.logspace(-2, 9, 60)]
    values = [w_of(x, PREC) for x in points]
    for i in range(1, len(points) - 1):
        left = (values[i] - values[i - 1]) / (points[i] - points[i - 1])
        right = (values[i + 1] - values[i]) / (points[i + 1] - points[i])
        assert right.hi <= left.lo


def test_derivative_matches_central_difference():
    for x in GRID:
        step = HPReal.exact(x, PREC) * mpf("1e-20")
        centre = HPReal.exact(x, PREC)
        difference = (w_of(centre + step, PREC) - w_of(centre - step, PREC)) / (2 * step)
        assert float(difference) == pytest.approx(float(w_derivative(x, PREC)), rel=1e-15)


def test_increment_is_bounded_by_relative_step():
    for i, x in enumerate(GRID):
        for y in GRID[i + 1:]:
            increment = w_of(y, PREC) - w_of(x, PREC)
            bound = (HPReal.exact(y, PREC) - x) / x
            assert increment.hi <= bound.lo
