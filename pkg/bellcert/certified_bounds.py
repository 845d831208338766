"""
Certified Enclosures
Theorem-backed intervals for ln B_n and for B_n / B_{n-1}. Every bound is an
HPReal enclosure, so a containment test is decided with its rounding margin
or reported as indeterminate.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

from mpmath import mp, mpf

from bellcert import config
from bellcert import precision as hp
from bellcert.asymptotics import log_e, log_e_star, q_of_r
from bellcert.exceptions import EmptyEnclosureError, ValidityError
from bellcert.lambert_w import exp_w, w_of
from bellcert.precision import HPReal, Real, as_hpreal, ratio

logger = logging.getLogger(__name__)

# Provenance labels
SECOND_ORDER = "second-order"
RELATIVE_ERROR = "relative-error"
E_UPPER = "e-upper"
ESTAR = "estar"
ELEMENTARY = "elementary"
BELL_RATIO = "bell-ratio"
BEST = "best"

# First index from which each bound is proven
VALID_FROM = {
    SECOND_ORDER: 1,
    RELATIVE_ERROR: 11,
    E_UPPER: 311,
    ESTAR: 2,
    ELEMENTARY: 2,
    BELL_RATIO: 1,
    BEST: 1,
}
REFINED_ELEMENTARY_FROM = 6


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INDETERMINATE = "INDETERMINATE"


def classify(lo: HPReal, value: HPReal, hi: HPReal) -> Verdict:
    """PASS when lo <= value <= hi is certain, FAIL when it is certainly violated"""
    if lo.hi <= value.lo and value.hi <= hi.lo:
        return Verdict.PASS
    if value.hi < lo.lo or value.lo > hi.hi:
        return Verdict.FAIL
    return Verdict.INDETERMINATE


@dataclass(frozen=True)
class Enclosure:
    """
    Certified interval [lo, hi] for ln B_n (scale "log") or for
    B_n / B_{n-1} (scale "linear"), valid for n >= valid_from.
    """

    lo: HPReal
    hi: HPReal
    theorem: str
    valid_from: int
    n: int
    scale: str = "log"
    contributors: Tuple[str, ...] = ()

    def contains(self, value: Real) -> Verdict:
        return classify(self.lo, as_hpreal(value, self.lo.precision), self.hi)

    @property
    def width(self) -> mpf:
        return mp.fsub(self.hi.hi, self.lo.lo, rounding="u")

    def as_dict(self):
        return {
            "n": self.n,
            "theorem": self.theorem,
            "scale": self.scale,
            "lo": hp.format_real(self.lo.lo),
            "hi": hp.format_real(self.hi.hi),
            "valid_from": self.valid_from,
            "contributors": list(self.contributors),
        }


class ElementaryBounds(NamedTuple):
    lower: HPReal
    upper: HPReal
    refined: Optional[HPReal]


def _require(n: int, theorem: str) -> None:
    valid_from = VALID_FROM[theorem]
    if n < valid_from:
        raise ValidityError(f"{theorem} bound needs n >= {valid_from} (got n={n})", valid_from=valid_from)


def _precision(precision: Optional[int]) -> int:
    return precision or config.DEFAULT_PRECISION


def enclosure_master(n: int, precision: Optional[int] = None) -> Enclosure:
    """ln B_n within ln E_n + ln(q_n -/+ 1.6 e^{-2R}), R = W(n+1)"""
    _require(n, SECOND_ORDER)
    precision = _precision(precision)
    r = w_of(n + 1, precision)
    q = q_of_r(r, precision)
    delta = ratio(8, 5, precision) * hp.exp(-2 * r)
    base = log_e(n, precision).log_value
    return Enclosure(
        lo=base + hp.log(q - delta),
        hi=base + hp.log(q + delta),
        theorem=SECOND_ORDER,
        valid_from=VALID_FROM[SECOND_ORDER],
        n=n,
    )


def enclosure_prop_main(n: int, precision: Optional[int] = None, tighten_upper: bool = True) -> Enclosure:
    """|B_n/E_n - 1| <= e^{-W(n+1)}/11 for n >= 11; the upper end drops to E_n from n = 311"""
    _require(n, RELATIVE_ERROR)
    precision = _precision(precision)
    rel = hp.exp(-w_of(n + 1, precision)) / 11
    base = log_e(n, precision).log_value
    hi = base + hp.log(1 + rel)
    if tighten_upper and n >= VALID_FROM[E_UPPER]:
        hi = base
    return Enclosure(
        lo=base + hp.log(1 - rel),
        hi=hi,
        theorem=RELATIVE_ERROR,
        valid_from=VALID_FROM[RELATIVE_ERROR],
        n=n,
    )


def prop_main_upper(n: int, precision: Optional[int] = None) -> Enclosure:
    """One-sided bound B_n <= E_n for n >= 311"""
    _require(n, E_UPPER)
    precision = _precision(precision)
    return Enclosure(
        lo=hp.unbounded_below(precision),
        hi=log_e(n, precision).log_value,
        theorem=E_UPPER,
        valid_from=VALID_FROM[E_UPPER],
        n=n,
    )


def enclosure_estar(n: int, precision: Optional[int] = None) -> Enclosure:
    """(1 - ln n/(5n)) E_n* <= B_n <= E_n* for n >= 2"""
    _require(n, ESTAR)
    precision = _precision(precision)
    upper = log_e_star(n, precision).log_value
    ln_n = hp.log(HPReal.exact(n, precision))
    return Enclosure(
        lo=upper + hp.log(1 - ln_n / (5 * n)),
        hi=upper,
        theorem=ESTAR,
        valid_from=VALID_FROM[ESTAR],
        n=n,
    )


def elementary_log_bounds(n: int, precision: Optional[int] = None) -> ElementaryBounds:
    """
    Logs of (n/(e ln n))^n, (3n/(4 ln n))^n and, for n >= 6,
    (n/(e ln n) * (1 + 3 ln ln n / ln n))^n
    """
    _require(n, ELEMENTARY)
    precision = _precision(precision)
    n_hp = HPReal.exact(n, precision)
    ln_n = hp.log(n_hp)
    ln_ln_n = hp.log(ln_n)
    base = hp.log(n_hp) - 1 - ln_ln_n
    lower = n * base
    upper = n * hp.log(ratio(3, 4, precision) * n_hp / ln_n)
    refined = None
    if n >= REFINED_ELEMENTARY_FROM:
        refined = n * (base + hp.log(1 + 3 * ln_ln_n / ln_n))
    return ElementaryBounds(lower, upper, refined)


def enclosure_elementary(n: int, precision: Optional[int] = None) -> Enclosure:
    bounds = elementary_log_bounds(n, precision)
    hi = bounds.upper
    if bounds.refined is not None and bounds.refined.hi < hi.hi:
        hi = bounds.refined
    return Enclosure(
        lo=bounds.lower,
        hi=hi,
        theorem=ELEMENTARY,
        valid_from=VALID_FROM[ELEMENTARY],
        n=n,
    )


def ratio_enclosure(n: int, precision: Optional[int] = None) -> Enclosure:
    """B_n / B_{n-1} within e^{W(n)} -/+ (8/7)/W(n), linear scale"""
    _require(n, BELL_RATIO)
    precision = _precision(precision)
    centre = exp_w(n, precision)
    half_width = ratio(8, 7, precision) / w_of(n, precision)
    return Enclosure(
        lo=centre - half_width,
        hi=centre + half_width,
        theorem=BELL_RATIO,
        valid_from=VALID_FROM[BELL_RATIO],
        n=n,
        scale="linear",
    )


def enclosures_at(n: int, precision: Optional[int] = None) -> List[Enclosure]:
    """Every log-scale enclosure proven at n"""
    found = [enclosure_master(n, precision)]
    if n >= VALID_FROM[ESTAR]:
        found.append(enclosure_estar(n, precision))
        found.append(enclosure_elementary(n, precision))
    if n >= VALID_FROM[RELATIVE_ERROR]:
        found.append(enclosure_prop_main(n, precision))
    return found


def best_enclosure(n: int, precision: Optional[int] = None) -> Enclosure:
    """Intersection of every enclosure valid at n"""
    _require(n, BEST)
    candidates = enclosures_at(n, precision)
    lo = max((c.lo for c in candidates), key=lambda x: x.lo)
    hi = min((c.hi for c in candidates), key=lambda x: x.hi)
    if lo.lo > hi.hi:
        names = ", ".join(c.theorem for c in candidates)
        logger.error("❌ Empty intersection at n=%d from %s", n, names)
        raise EmptyEnclosureError(f"enclosures at n={n} do not intersect ({names})")
    return Enclosure(
        lo=lo,
        hi=hi,
        theorem=BEST,
        valid_from=VALID_FROM[BEST],
        n=n,
        contributors=tuple(c.theorem for c in candidates),
    )


def digit_count(n: int, precision: Optional[int] = None) -> Tuple[int, int]:
    """Lower and upper bound on the number of decimal digits of B_n"""
    enclosure = best_enclosure(n, precision)
    precision = _precision(precision)
    ln10 = hp.log(HPReal.exact(10, precision))
    low = enclosure.lo / ln10
    high = enclosure.hi / ln10
    digits_lo = int(mp.floor(low.lo)) + 1 if mp.isfinite(low.lo) else 1
    digits_hi = int(mp.floor(high.hi)) + 1
    return max(digits_lo, 1), max(digits_hi, 1)
