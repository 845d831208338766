"""
Exact Bell Numbers
Bell triangle (Aitken array) for consecutive values, the binomial
recurrence and a Dobinski partial sum as independent oracles
"""

import logging
import math
import sys
import threading
from dataclasses import dataclass
from typing import List, Optional, Tuple

from mpmath import iv, mp

from bellcert import config
from bellcert.exceptions import IndeterminateError, ResourceLimitError, ValidityError
from bellcert.precision import HPReal, working_precision

logger = logging.getLogger(__name__)

# Dobinski truncation: first candidate index is 3 * max(n, 8)
DOBINSKI_START_FACTOR = 3
DOBINSKI_TAIL_LIMIT = 0.1
DOBINSKI_ROUNDING_LIMIT = 0.4
DOBINSKI_MAX_TERMS = 1_000_000


@dataclass(frozen=True)
class BellTable:
    """Exact B_0..B_{n_max}"""
    values: Tuple[int, ...]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def _check_index(n: int, lowest: int = 0) -> None:
    if n < lowest:
        raise ValidityError(f"n >= {lowest} (got n={n})", valid_from=lowest)
    cap = config.MAX_BELL_INDEX
    if n > cap:
        raise ResourceLimitError(n, cap)


class BellTriangle:
    """Bell triangle extended on demand and shared by every caller"""

    def __init__(self):
        self._values: List[int] = [1]
        self._row: List[int] = [1]
        self._lock = threading.Lock()

    @property
    def n_max(self) -> int:
        return len(self._values) - 1

    def extend_to(self, n_max: int) -> None:
        """Grow the triangle row by row until B_{n_max} is known"""
        _check_index(n_max)
        with self._lock:
            start = len(self._values)
            if n_max < start:
                return
            logger.info("🔍 Extending Bell triangle from row %d to row %d", start - 1, n_max)
            row = self._row
            for _ in range(start, n_max + 1):
                # each row starts with the last entry of the previous one
                next_row = [row[-1]]
                for entry in row:
                    next_row.append(next_row[-1] + entry)
                row = next_row
                self._values.append(row[0])
            self._row = row
            logger.info("✅ Bell triangle ready up to n=%d", n_max)

    def table(self, n_max: int) -> BellTable:
        self.extend_to(n_max)
        return BellTable(tuple(self._values[:n_max + 1]))

    def value(self, n: int) -> int:
        self.extend_to(n)
        return self._values[n]

    def seed(self, values: Tuple[int, ...]) -> None:
        """Install an already computed prefix (worker processes)"""
        with self._lock:
            if len(values) <= len(self._values):
                return
            self._values = list(values)
            self._row = self._rebuild_row(values)

    @staticmethod
    def _rebuild_row(values: Tuple[int, ...]) -> List[int]:
        # entry k of row n is sum_i C(k, i) B_{n-k+i}
        n = len(values) - 1
        row = [values[n]]
        for j in range(1, n + 1):
            row.append(sum(math.comb(j, i) * values[n + i - j] for i in range(j + 1)))
        return row


bell_triangle = BellTriangle()


def bell_table(n_max: int) -> BellTable:
    """Exact B_0..B_{n_max} from the Bell triangle"""
    return bell_triangle.table(n_max)


def bell(n: int) -> int:
    """Exact B_n"""
    _check_index(n)
    return bell_triangle.value(n)


def bell_recurrence(n_max: int) -> BellTable:
    """B_{n+1} = sum_{k=0}^{n} C(n, k) B_k, read off the generating function e^(e^t - 1)"""
    _check_index(n_max)
    values = [1]
    for n in range(n_max):
        values.append(sum(math.comb(n, k) * values[k] for k in range(n + 1)))
    return BellTable(tuple(values))


def bell_dobinski_oracle(n: int, precision: Optional[int] = None) -> int:
    """
    B_n as the nearest integer to (1/e) sum_k k^n / k!

    The partial sum is carried in interval arithmetic and the tail is
    bounded by a geometric series, so the integer returned is certified.
    Without an explicit precision enough bits for B_n are chosen; an
    explicit precision is honoured, and one too small to pin the integer
    raises IndeterminateError so the caller can retry higher.
    """
    if n < 1:
        raise ValidityError(f"n >= 1 (got n={n})", valid_from=1)
    if precision is None:
        # B_n < n^n, so this many bits keep the rounding error well under 1
        precision = max(config.DEFAULT_PRECISION, int(n * math.log2(n + 1)) + 64)

    with working_precision(precision):
        inv_e = 1 / iv.e
        start = DOBINSKI_START_FACTOR * max(n, 8)
        total = iv.mpf(0)
        factorial = 1
        tail = None
        for k in range(DOBINSKI_MAX_TERMS):
            if k > 0:
                factorial *= k
            term = iv.mpf(k ** n) / factorial
            total += term
            if k < start:
                continue
            # term_{j+1}/term_j = (1 + 1/j)^n / (j + 1) decreases in j
            ratio = iv.mpf((k + 1) ** n) / (iv.mpf(k ** n) * (k + 1))
            ratio_hi = mp.make_mpf(ratio._mpi_[1])
            if ratio_hi >= 0.5:
                continue
            bound = term * ratio / (1 - ratio) * inv_e
            if mp.make_mpf(bound._mpi_[1]) < DOBINSKI_TAIL_LIMIT:
                tail = bound
                break
        if tail is None:
            raise IndeterminateError(f"Dobinski tail did not drop below {DOBINSKI_TAIL_LIMIT}", precision)

        enclosure = total * inv_e + iv.mpf([0, mp.make_mpf(tail._mpi_[1])])
        lo, hi = mp.make_mpf(enclosure._mpi_[0]), mp.make_mpf(enclosure._mpi_[1])
        width = hi - lo
        nearest_lo, nearest_hi = int(mp.ceil(lo)), int(mp.floor(hi))

    if width >= DOBINSKI_ROUNDING_LIMIT or nearest_lo != nearest_hi:
        raise IndeterminateError(f"Dobinski sum for n={n} does not round to a unique integer", precision)
    logger.debug("✅ Dobinski oracle n=%d certified with %d terms", n, k + 1)
    return nearest_lo


def log_of_integer(value: int, precision: Optional[int] = None) -> HPReal:
    """ln of a positive exact integer with guard bits"""
    if value < 1:
        raise ValueError("log_of_integer needs a positive integer")
    precision = precision or config.DEFAULT_PRECISION
    with working_precision(precision + config.GUARD_BITS):
        return HPReal.from_interval(iv.log(iv.mpf(value)), precision)


def ratio_of_integers(numerator: int, denominator: int, precision: Optional[int] = None) -> HPReal:
    precision = precision or config.DEFAULT_PRECISION
    with working_precision(precision + config.GUARD_BITS):
        return HPReal.from_interval(iv.mpf(numerator) / iv.mpf(denominator), precision)


def log_bell(n: int, precision: Optional[int] = None) -> HPReal:
    """ln B_n taken from the exact integer"""
    return log_of_integer(bell(n), precision)


def bell_ratio_exact(n: int, precision: Optional[int] = None) -> HPReal:
    """B_n / B_{n-1} from the exact integers"""
    if n < 1:
        raise ValidityError(f"n >= 1 (got n={n})", valid_from=1)
    return ratio_of_integers(bell(n), bell(n - 1), precision)


def decimal_digits(value: int) -> int:
    """Number of decimal digits of |value| without building its string"""
    value = abs(value)
    if value == 0:
        return 1
    digits = int((value.bit_length() - 1) * math.log10(2)) + 1
    while 10 ** digits <= value:
        digits += 1
    while digits > 1 and 10 ** (digits - 1) > value:
        digits -= 1
    return digits


def decimal_string(value: int) -> str:
    """Full decimal representation, lifting the interpreter's int->str digit limit"""
    set_limit = getattr(sys, "set_int_max_str_digits", None)
    if set_limit is None:
        return str(value)
    previous = sys.get_int_max_str_digits()
    set_limit(0)
    try:
        return str(value)
    finally:
        set_limit(previous)
