"""
High-precision reals with a certified rounding budget.

Every HPReal is an outward-rounded enclosure [lo, hi] produced by mpmath's
interval context, so a chain of operations never loses track of its
accumulated rounding error. `value` is the midpoint and `err_budget` the
half-width.

mpmath keeps its working precision in process-global state, and
`working_precision` sets it for the whole process. Parallel evaluation
therefore runs in worker processes; threads must not evaluate concurrently.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Tuple, Union

from mpmath import iv, mp, mpf

Real = Union[int, float, str, Fraction, mpf, "HPReal"]

NEG_INF = mpf("-inf")
POS_INF = mpf("inf")


@contextlib.contextmanager
def working_precision(bits: int) -> Iterator[None]:
    """Set mp and iv precision together, restoring both on exit"""
    old_mp, old_iv = mp.prec, iv.prec
    mp.prec = bits
    iv.prec = bits
    try:
        yield
    finally:
        mp.prec = old_mp
        iv.prec = old_iv


def endpoints(x) -> Tuple[mpf, mpf]:
    """Exact lower/upper endpoints of an iv interval as mpf values"""
    a, b = x._mpi_
    return mp.make_mpf(a), mp.make_mpf(b)


def _to_interval(x: Real):
    # caller is responsible for the active iv precision
    if isinstance(x, HPReal):
        return x.interval()
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / x.denominator
    return iv.mpf(x)


@dataclass(frozen=True)
class HPReal:
    """Certified enclosure of a real number at a nominal precision (bits)"""

    lo: mpf
    hi: mpf
    precision: int

    @classmethod
    def from_interval(cls, x, precision: int) -> "HPReal":
        lo, hi = endpoints(x)
        return cls(lo, hi, precision)

    @classmethod
    def exact(cls, x: Real, precision: int) -> "HPReal":
        """Enclose an int, string, Fraction or mpf at the given precision"""
        if isinstance(x, HPReal):
            return x
        with working_precision(precision):
            return cls.from_interval(_to_interval(x), precision)

    def interval(self):
        return iv.mpf([self.lo, self.hi])

    @property
    def value(self) -> mpf:
        if self.lo == self.hi:
            return self.lo
        with working_precision(self.precision + 8):
            return (self.lo + self.hi) / 2

    @property
    def err_budget(self) -> mpf:
        if self.lo == self.hi:
            return mpf(0)
        with working_precision(self.precision + 8):
            return mp.fsub(self.hi, self.lo, rounding="u") / 2

    @property
    def is_finite(self) -> bool:
        return mp.isfinite(self.lo) and mp.isfinite(self.hi)

    def is_tight(self) -> bool:
        """err_budget <= 2^-(precision/2) relative to max(1, |value|)"""
        if not self.is_finite:
            return False
        scale = max(mpf(1), abs(self.value))
        return self.err_budget <= mp.ldexp(scale, -(self.precision // 2))

    def certainly_le(self, other: Real) -> bool:
        other = as_hpreal(other, self.precision)
        return self.hi <= other.lo

    def certainly_lt(self, other: Real) -> bool:
        other = as_hpreal(other, self.precision)
        return self.hi < other.lo

    def contains(self, x: Real) -> bool:
        x = as_hpreal(x, self.precision)
        return self.lo <= x.lo and x.hi <= self.hi

    def _lift(self, other: Real, op, reflected: bool = False) -> "HPReal":
        prec = max(self.precision, other.precision) if isinstance(other, HPReal) else self.precision
        with working_precision(prec):
            a, b = self.interval(), _to_interval(other)
            result = op(b, a) if reflected else op(a, b)
            return HPReal.from_interval(result, prec)

    def __add__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a + b)

    def __radd__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a + b, reflected=True)

    def __sub__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a - b)

    def __rsub__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a - b, reflected=True)

    def __mul__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a * b)

    def __rmul__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a * b, reflected=True)

    def __truediv__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a / b)

    def __rtruediv__(self, other: Real) -> "HPReal":
        return self._lift(other, lambda a, b: a / b, reflected=True)

    def __pow__(self, k: int) -> "HPReal":
        if not isinstance(k, int):
            raise TypeError("HPReal only supports integer powers")
        return self._lift(k, lambda a, b: a ** b)

    def __neg__(self) -> "HPReal":
        return HPReal(-self.hi, -self.lo, self.precision)

    def __abs__(self) -> "HPReal":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return HPReal(mpf(0), max(-self.lo, self.hi), self.precision)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return mp.nstr(self.value, 12)


def as_hpreal(x: Real, precision: int) -> HPReal:
    return x if isinstance(x, HPReal) else HPReal.exact(x, precision)


def ratio(p: int, q: int, precision: int) -> HPReal:
    """Certified enclosure of the rational p/q"""
    return HPReal.exact(Fraction(p, q), precision)


def _unary(x: HPReal, fn) -> HPReal:
    with working_precision(x.precision):
        return HPReal.from_interval(fn(x.interval()), x.precision)


def exp(x: HPReal) -> HPReal:
    return _unary(x, iv.exp)


def sqrt(x: HPReal) -> HPReal:
    if x.lo < 0:
        raise ValueError("sqrt of an interval reaching below zero")
    return _unary(x, iv.sqrt)


def cos(x: HPReal) -> HPReal:
    return _unary(x, iv.cos)


def log(x: HPReal) -> HPReal:
    """Natural log; a lower endpoint at or below zero maps to -inf"""
    if x.hi <= 0:
        raise ValueError(f"log of a non-positive quantity {x}")
    if x.lo <= 0:
        upper = _unary(HPReal(x.hi, x.hi, x.precision), iv.log)
        return HPReal(NEG_INF, upper.hi, x.precision)
    return _unary(x, iv.log)


def pi(precision: int) -> HPReal:
    with working_precision(precision):
        return HPReal.from_interval(+iv.pi, precision)


def euler_e(precision: int) -> HPReal:
    with working_precision(precision):
        return HPReal.from_interval(+iv.e, precision)


def unbounded_below(precision: int) -> HPReal:
    return HPReal(NEG_INF, NEG_INF, precision)


def unbounded_above(precision: int) -> HPReal:
    return HPReal(POS_INF, POS_INF, precision)


def format_real(x: mpf, digits: int = 12) -> str:
    return mp.nstr(x, digits)
