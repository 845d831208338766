"""
Asymptotic Forms
Log-domain evaluation of E_n, E_n*, the correction factor q_n and the
comparison estimators. Magnitudes are only exponentiated for display.
"""

import logging
import math
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional

from mpmath import mp

from bellcert import config
from bellcert import precision as hp
from bellcert.bell_exact import log_of_integer
from bellcert.exceptions import ValidityError
from bellcert.lambert_w import exp_w, w_of
from bellcert.precision import HPReal, Real, as_hpreal, ratio

logger = logging.getLogger(__name__)

# largest natural log that still fits a double after exponentiation
FLOAT_LOG_LIMIT = 700


@dataclass(frozen=True)
class LogMagnitude:
    """A positive quantity stored as its natural log"""
    log_value: HPReal
    provenance: str

    @property
    def precision(self) -> int:
        return self.log_value.precision

    def to_float(self) -> Optional[float]:
        """exp(log_value) as a float, or None when it would overflow"""
        if self.log_value.hi >= FLOAT_LOG_LIMIT:
            return None
        return float(mp.exp(self.log_value.value))

    def __str__(self) -> str:
        return f"exp({self.log_value}) [{self.provenance}]"


@dataclass(frozen=True)
class CorrectionFactor:
    q: HPReal
    r: HPReal
    n: int


class LogFactorialTable:
    """
    ln n! built from exact products of consecutive integers.

    Checkpoints ln((BLOCK*k)!) are cached per working precision, so the
    cost of a query is one block product plus one certified log.
    """

    BLOCK = 256

    def __init__(self):
        self._checkpoints: Dict[int, List[HPReal]] = {}
        self._lock = threading.Lock()

    def _extend(self, precision: int, block: int) -> HPReal:
        with self._lock:
            checkpoints = self._checkpoints.setdefault(precision, [HPReal.exact(0, precision)])
            while len(checkpoints) <= block:
                k = len(checkpoints) - 1
                product = math.prod(range(k * self.BLOCK + 1, (k + 1) * self.BLOCK + 1))
                checkpoints.append(checkpoints[-1] + log_of_integer(product, precision))
            return checkpoints[block]

    def log_factorial(self, n: int, precision: int) -> HPReal:
        if n < 0:
            raise ValidityError(f"n >= 0 (got n={n})", valid_from=0)
        block = n // self.BLOCK
        base = self._extend(precision, block)
        tail = math.prod(range(block * self.BLOCK + 1, n + 1))
        if tail == 1:
            return base
        return base + log_of_integer(tail, precision)

    def clear(self) -> None:
        with self._lock:
            self._checkpoints.clear()


log_factorial_table = LogFactorialTable()


def log_factorial(n: int, precision: Optional[int] = None) -> HPReal:
    """Certified ln n!"""
    return log_factorial_table.log_factorial(n, precision or config.DEFAULT_PRECISION)


def log_factorial_exact(n: int, precision: Optional[int] = None) -> HPReal:
    """ln n! from math.factorial; slow, kept as an oracle for log_factorial"""
    if n < 0:
        raise ValidityError(f"n >= 0 (got n={n})", valid_from=0)
    return log_of_integer(math.factorial(n), precision)


def log_e(n: int, precision: Optional[int] = None) -> LogMagnitude:
    """ln E_n = ln n! + (e^R - 1) - n ln R - ln(2 pi (n+1)(R+1)) / 2 with R = W(n+1)"""
    if n < 0:
        raise ValidityError(f"n >= 0 (got n={n})", valid_from=0)
    precision = precision or config.DEFAULT_PRECISION
    r = w_of(n + 1, precision)
    e_r = exp_w(n + 1, precision)
    two_pi = 2 * hp.pi(precision)
    value = (
        log_factorial(n, precision)
        + (e_r - 1)
        - n * hp.log(r)
        - hp.log(two_pi * (n + 1) * (r + 1)) / 2
    )
    return LogMagnitude(value, "E_n")


def log_e_star(n: int, precision: Optional[int] = None) -> LogMagnitude:
    """ln E_n* = e^{W(n)} + n W(n) - (n+1) - ln(1 + W(n)) / 2"""
    if n < 1:
        raise ValidityError(f"n >= 1 (got n={n})", valid_from=1)
    precision = precision or config.DEFAULT_PRECISION
    w = w_of(n, precision)
    value = exp_w(n, precision) + n * w - (n + 1) - hp.log(1 + w) / 2
    return LogMagnitude(value, "E_n*")


def q_of_r(r: Real, precision: Optional[int] = None) -> HPReal:
    """Q(R) = 1 - e^{-R} (1 - 3/(2R) - 10/R^2 - 9/R^3 + 1/R^4) / (12 (1 + 1/R)^3)"""
    precision = precision or config.DEFAULT_PRECISION
    r = as_hpreal(r, precision)
    inv = 1 / r
    bracket = 1 - ratio(3, 2, precision) * inv - 10 * inv ** 2 - 9 * inv ** 3 + inv ** 4
    return 1 - hp.exp(-r) * bracket / (12 * (1 + inv) ** 3)


def q_factor(n: int, precision: Optional[int] = None) -> CorrectionFactor:
    """q_n = Q(W(n+1))"""
    if n < 0:
        raise ValidityError(f"n >= 0 (got n={n})", valid_from=0)
    precision = precision or config.DEFAULT_PRECISION
    r = w_of(n + 1, precision)
    return CorrectionFactor(q=q_of_r(r, precision), r=r, n=n)


def second_order_estimate(n: int, precision: Optional[int] = None) -> LogMagnitude:
    """ln(E_n q_n), the centre of the second-order enclosure"""
    if n < 1:
        raise ValidityError(f"n >= 1 (got n={n})", valid_from=1)
    precision = precision or config.DEFAULT_PRECISION
    value = log_e(n, precision).log_value + hp.log(q_factor(n, precision).q)
    return LogMagnitude(value, "E_n*q_n")


def bt_upper_estimate(n: int, precision: Optional[int] = None) -> LogMagnitude:
    """n ln(0.792 n / ln(n+1)), a classical elementary upper bound used for comparison"""
    if n < 1:
        raise ValidityError(f"n >= 1 (got n={n})", valid_from=1)
    precision = precision or config.DEFAULT_PRECISION
    base = ratio(792, 1000, precision) * n / hp.log(HPReal.exact(n + 1, precision))
    return LogMagnitude(n * hp.log(base), "0.792n/ln(n+1)")
