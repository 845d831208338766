"""
Lambert W (principal branch)
Halley iteration in mpmath, certified afterwards by a sign-checked bracket
in interval arithmetic and a stored residual |w*e^w - x|
"""

import functools
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from mpmath import iv, mp, mpf

from bellcert import config
from bellcert.exceptions import (
    ConvergenceError,
    IndeterminateError,
    LambertDomainError,
    ValidityError,
)
from bellcert.precision import HPReal, Real, as_hpreal, endpoints, working_precision
from bellcert import precision as hp

logger = logging.getLogger(__name__)

MAX_HALLEY_ITERATIONS = 64
MAX_BRACKET_WIDENINGS = 40
# residual tolerance is max(x, 1) * 2^-(precision - RESIDUAL_SLACK_BITS)
RESIDUAL_SLACK_BITS = 16


@dataclass(frozen=True)
class WValue:
    """Certified W(x): w encloses the root, residual encloses |w*e^w - x|"""
    w: HPReal
    x: HPReal
    residual: HPReal
    tolerance: mpf


def _initial_guess(x: mpf) -> mpf:
    if x >= mp.e:
        guess = mp.log(x) - mp.log(mp.log(x))
    else:
        guess = x / (1 + x)
    return max(guess, mpf(0))


def _halley(x: mpf) -> mpf:
    """Point iterate for w*e^w = x at the active mp precision"""
    if x == 0:
        return mpf(0)
    w = _initial_guess(x)
    for _ in range(MAX_HALLEY_ITERATIONS):
        ew = mp.exp(w)
        f = w * ew - x
        wp1 = w + 1
        step = f / (ew * wp1 - (w + 2) * f / (2 * wp1))
        w -= step
        if abs(step) <= mp.ldexp(max(mpf(1), abs(w)), -(mp.prec - 4)):
            return w
    raise ConvergenceError(f"Halley iteration for W({mp.nstr(x, 15)}) did not converge "
                           f"in {MAX_HALLEY_ITERATIONS} steps")


def _w_times_exp(w: mpf):
    point = iv.mpf(w)
    return point * iv.exp(point)


def _certified_bracket(w_lo: mpf, w_hi: mpf, x_lo: mpf, x_hi: mpf) -> Tuple[mpf, mpf]:
    """Widen [w_lo, w_hi] until f(lo) <= x_lo and f(hi) >= x_hi hold with certainty"""
    # f(w) = w*e^w is increasing on [0, inf), so the bracket encloses every root
    delta = mp.ldexp(max(mpf(1), abs(w_hi)), -(mp.prec - 4))
    for _ in range(MAX_BRACKET_WIDENINGS):
        lo = mpf(0) if x_lo == 0 else max(w_lo - delta, mpf(0))
        hi = w_hi + delta
        f_lo_hi = endpoints(_w_times_exp(lo))[1]
        f_hi_lo = endpoints(_w_times_exp(hi))[0]
        if f_lo_hi <= x_lo and f_hi_lo >= x_hi:
            return lo, hi
        delta *= 4
    raise ConvergenceError("could not certify a bracket for W")


@functools.lru_cache(maxsize=4096)
def _lambert_w_cached(x_lo: mpf, x_hi: mpf, precision: int) -> WValue:
    work = precision + config.W_GUARD_BITS
    x = HPReal(x_lo, x_hi, precision)
    with working_precision(work):
        w_lo = _halley(x_lo)
        w_hi = w_lo if x_hi == x_lo else _halley(x_hi)
        lo, hi = _certified_bracket(w_lo, w_hi, x_lo, x_hi)

        w_interval = iv.mpf([lo, hi])
        defect = w_interval * iv.exp(w_interval) - x.interval()
        residual = abs(HPReal.from_interval(defect, precision))

        tolerance = mp.ldexp(max(mpf(1), x_hi), -(precision - RESIDUAL_SLACK_BITS)) + (x_hi - x_lo)

    if residual.hi > tolerance:
        raise ConvergenceError(f"W residual {mp.nstr(residual.hi, 5)} above tolerance "
                               f"{mp.nstr(tolerance, 5)}")
    return WValue(w=HPReal(lo, hi, precision), x=x, residual=residual, tolerance=tolerance)


def lambert_w(x: Real, precision: Optional[int] = None) -> WValue:
    """Certified principal-branch W(x) for x >= 0"""
    precision = precision or config.DEFAULT_PRECISION
    x = as_hpreal(x, precision)
    if x.lo < 0:
        raise LambertDomainError(f"lambert_w needs x >= 0 (got {x}); branch -1 is not implemented")
    return _lambert_w_cached(x.lo, x.hi, precision)


def w_of(x: Real, precision: Optional[int] = None) -> HPReal:
    """Shorthand for lambert_w(x).w"""
    return lambert_w(x, precision).w


def exp_w(x: Real, precision: Optional[int] = None) -> HPReal:
    """e^{W(x)} evaluated as x / W(x); the limit value 1 at x = 0"""
    precision = precision or config.DEFAULT_PRECISION
    x = as_hpreal(x, precision)
    if x.hi == 0:
        return HPReal.exact(1, precision)
    w = w_of(x, precision)
    if w.lo <= 0:
        return hp.exp(w)
    return x / w


def w_integral(x: Real, precision: Optional[int] = None) -> HPReal:
    """e^{W(x)} + x W(x) - x - 1, the integral of W over [0, x]"""
    precision = precision or config.DEFAULT_PRECISION
    x = as_hpreal(x, precision)
    return exp_w(x, precision) + x * w_of(x, precision) - x - 1


def omega(precision: Optional[int] = None) -> HPReal:
    """Omega constant W(1)"""
    return w_of(1, precision)


def w_derivative(x: Real, precision: Optional[int] = None) -> HPReal:
    """W'(x) = 1 / (x + e^{W(x)})"""
    precision = precision or config.DEFAULT_PRECISION
    x = as_hpreal(x, precision)
    return 1 / (x + exp_w(x, precision))


def log_sandwich(x: Real, precision: Optional[int] = None) -> Tuple[HPReal, HPReal]:
    """(ln x - ln ln x, ln x), which bracket W(x) for x >= e"""
    precision = precision or config.DEFAULT_PRECISION
    x = as_hpreal(x, precision)
    if x.hi < hp.euler_e(precision).lo:
        raise ValidityError(f"x >= e (got x={x})")
    ln_x = hp.log(x)
    return ln_x - hp.log(ln_x), ln_x


def first_index_with_w_at_least(r: Real, shift: int = 1, precision: Optional[int] = None) -> int:
    """
    Smallest n >= 0 with W(n + shift) >= r.

    W is increasing, so W(n + shift) >= r iff n + shift >= r*e^r.
    """
    precision = precision or config.DEFAULT_PRECISION
    r = as_hpreal(r, precision)
    threshold = r * hp.exp(r)
    lo, hi = int(mp.ceil(threshold.lo)), int(mp.ceil(threshold.hi))
    if lo != hi:
        raise IndeterminateError(f"r*e^r = {threshold} straddles an integer", precision)
    index = max(lo - shift, 0)
    logger.debug("🔍 W(n+%d) >= %s from n=%d", shift, r, index)
    return index

