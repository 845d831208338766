"""
Verification Checks
Registry of every inequality the harness verifies. Each check evaluates
(lower bound, quantity, upper bound) at a given precision; a comparison
that lands inside the rounding margin is retried at doubled precision.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from bellcert import config
from bellcert import precision as hp
from bellcert.asymptotics import bt_upper_estimate, log_e, log_e_star, q_factor
from bellcert.bell_exact import bell_ratio_exact, bell_triangle, log_bell
from bellcert.certified_bounds import (
    Verdict,
    classify,
    elementary_log_bounds,
    enclosure_estar,
    enclosure_master,
    enclosure_prop_main,
    prop_main_upper,
    ratio_enclosure,
)
from bellcert.lambert_w import exp_w, first_index_with_w_at_least, w_of
from bellcert.precision import HPReal, ratio

logger = logging.getLogger(__name__)

CheckResult = Tuple[HPReal, HPReal, HPReal]

# q_n properties are proven once W(n+1) >= 5
Q_REGIME_FROM = first_index_with_w_at_least(5, shift=1)
SCALED_ERROR_FROM = 100
# B_n <= E_n from here on, so the scaled error is negative
SCALED_ERROR_SIGN_FROM = 311


@dataclass(frozen=True)
class VerificationRecord:
    """Outcome of one inequality check at one index"""
    n: int
    theorem: str
    lo: HPReal
    value: HPReal
    hi: HPReal
    verdict: Verdict
    precision_used: int

    def as_row(self) -> Dict:
        return {
            "theorem": self.theorem,
            "n": self.n,
            "lo": hp.format_real(self.lo.lo),
            "value": hp.format_real(self.value.value),
            "hi": hp.format_real(self.hi.hi),
            "verdict": self.verdict.value,
            "precision_bits": self.precision_used,
        }


@dataclass(frozen=True)
class Check:
    check_id: str
    description: str
    valid_from: int
    needs_exact: bool
    evaluate: Callable[[int, int], CheckResult]


def _with_log_bell(enclosure, n: int, precision: int) -> CheckResult:
    return enclosure.lo, log_bell(n, precision), enclosure.hi


def _second_order(n: int, precision: int) -> CheckResult:
    return _with_log_bell(enclosure_master(n, precision), n, precision)


def _relative_error(n: int, precision: int) -> CheckResult:
    return _with_log_bell(enclosure_prop_main(n, precision, tighten_upper=False), n, precision)


def _e_upper(n: int, precision: int) -> CheckResult:
    return _with_log_bell(prop_main_upper(n, precision), n, precision)


def _estar(n: int, precision: int) -> CheckResult:
    return _with_log_bell(enclosure_estar(n, precision), n, precision)


def _elementary_lower(n: int, precision: int) -> CheckResult:
    bounds = elementary_log_bounds(n, precision)
    return bounds.lower, log_bell(n, precision), hp.unbounded_above(precision)


def _elementary_upper(n: int, precision: int) -> CheckResult:
    bounds = elementary_log_bounds(n, precision)
    return hp.unbounded_below(precision), log_bell(n, precision), bounds.upper


def _elementary_refined(n: int, precision: int) -> CheckResult:
    bounds = elementary_log_bounds(n, precision)
    return hp.unbounded_below(precision), log_bell(n, precision), bounds.refined


def _e_vs_estar(n: int, precision: int) -> CheckResult:
    # ln(1 - 1/(2n)) <= ln E_n - ln E_n* <= 0
    gap = log_e(n, precision).log_value - log_e_star(n, precision).log_value
    lower = hp.log(1 - ratio(1, 2 * n, precision))
    return lower, gap, HPReal.exact(0, precision)


def _e_ratio(n: int, precision: int) -> CheckResult:
    # -1/W(n) <= E_n/E_{n-1} - e^{W(n)} <= 0
    step = hp.exp(log_e(n, precision).log_value - log_e(n - 1, precision).log_value)
    deviation = step - exp_w(n, precision)
    return -1 / w_of(n, precision), deviation, HPReal.exact(0, precision)


def _bell_ratio(n: int, precision: int) -> CheckResult:
    enclosure = ratio_enclosure(n, precision)
    return enclosure.lo, bell_ratio_exact(n, precision), enclosure.hi


def _q_range(n: int, precision: int) -> CheckResult:
    factor = q_factor(n, precision)
    return 1 - hp.exp(-factor.r) / 12, factor.q, HPReal.exact(1, precision)


def _q_margin(n: int, precision: int) -> CheckResult:
    factor = q_factor(n, precision)
    padded = factor.q + ratio(8, 5, precision) * hp.exp(-2 * factor.r)
    return hp.unbounded_below(precision), padded, HPReal.exact(1, precision)


def _q_step(n: int, precision: int) -> CheckResult:
    current = q_factor(n, precision)
    step = abs(q_factor(n + 1, precision).q - current.q)
    limit = hp.exp(-current.r) / (10 * (n + 1))
    return HPReal.exact(0, precision), step, limit


def _bt_upper(n: int, precision: int) -> CheckResult:
    return hp.unbounded_below(precision), log_bell(n, precision), bt_upper_estimate(n, precision).log_value


def scaled_error(n: int, precision: int) -> HPReal:
    """a_n = (n / ln n) (B_n / E_n - 1)"""
    scale = n / hp.log(HPReal.exact(n, precision))
    return scale * (hp.exp(log_bell(n, precision) - log_e(n, precision).log_value) - 1)


def scaled_error_band(n: int, precision: int) -> Tuple[HPReal, HPReal]:
    """Band for a_n implied by the second-order enclosure"""
    scale = n / hp.log(HPReal.exact(n, precision))
    factor = q_factor(n, precision)
    delta = ratio(8, 5, precision) * hp.exp(-2 * factor.r)
    return scale * (factor.q - 1 - delta), scale * (factor.q - 1 + delta)


def _scaled_error(n: int, precision: int) -> CheckResult:
    # a_n - (n/ln n)(q_n - 1) within +/- 1.6 (n/ln n) e^{-2R}
    scale = n / hp.log(HPReal.exact(n, precision))
    factor = q_factor(n, precision)
    bound = scale * ratio(8, 5, precision) * hp.exp(-2 * factor.r)
    offset = scaled_error(n, precision) - scale * (factor.q - 1)
    return -bound, offset, bound


def _scaled_error_sign(n: int, precision: int) -> CheckResult:
    return hp.unbounded_below(precision), scaled_error(n, precision), HPReal.exact(0, precision)


_CHECK_LIST = [
    Check("second-order", "E_n (q_n -/+ 1.6 e^{-2R}) encloses B_n", 1, True, _second_order),
    Check("relative-error", "|B_n/E_n - 1| <= e^{-W(n+1)}/11", 11, True, _relative_error),
    Check("e-upper", "B_n <= E_n", 311, True, _e_upper),
    Check("estar", "(1 - ln n/(5n)) E_n* <= B_n <= E_n*", 2, True, _estar),
    Check("elementary-lower", "(n/(e ln n))^n <= B_n", 2, True, _elementary_lower),
    Check("elementary-upper", "B_n <= (3n/(4 ln n))^n", 2, True, _elementary_upper),
    Check("elementary-refined", "B_n <= (n/(e ln n) (1 + 3 ln ln n/ln n))^n", 6, True, _elementary_refined),
    Check("e-vs-estar", "(1 - 1/(2n)) E_n* <= E_n <= E_n*", 1, False, _e_vs_estar),
    Check("e-ratio", "-1/W(n) <= E_n/E_{n-1} - e^{W(n)} <= 0", 1, False, _e_ratio),
    Check("bell-ratio", "|B_n/B_{n-1} - e^{W(n)}| <= (8/7)/W(n)", 1, True, _bell_ratio),
    Check("q-range", "1 - e^{-R}/12 <= q_n <= 1", Q_REGIME_FROM, False, _q_range),
    Check("q-margin", "q_n + 1.6 e^{-2R} <= 1", Q_REGIME_FROM, False, _q_margin),
    Check("q-step", "|q_{n+1} - q_n| <= e^{-R}/(10(n+1))", Q_REGIME_FROM, False, _q_step),
    Check("bt-upper", "B_n <= (0.792 n/ln(n+1))^n", 1, True, _bt_upper),
    Check("scaled-error", "a_n within its second-order band", SCALED_ERROR_FROM, True, _scaled_error),
    Check("scaled-error-sign", "a_n <= 0", SCALED_ERROR_SIGN_FROM, True, _scaled_error_sign),
]

CHECKS: Dict[str, Check] = {check.check_id: check for check in _CHECK_LIST}


def run_check(check_id: str, n: int, precision: int) -> VerificationRecord:
    """Evaluate one check, doubling precision while the verdict is indeterminate"""
    check = CHECKS[check_id]
    bits = precision
    escalations = 0
    while True:
        lo, value, hi = check.evaluate(n, bits)
        verdict = classify(lo, value, hi)
        if verdict is not Verdict.INDETERMINATE or escalations >= config.MAX_ESCALATIONS:
            break
        logger.warning("⚠️ %s at n=%d undecided at %d bits, retrying at %d", check_id, n, bits, bits * 2)
        escalations += 1
        bits *= 2

    if verdict is Verdict.FAIL:
        logger.error("❌ %s fails at n=%d", check_id, n)
    return VerificationRecord(n=n, theorem=check_id, lo=lo, value=value, hi=hi,
                              verdict=verdict, precision_used=bits)


def init_worker(bell_values: Tuple[int, ...]) -> None:
    """Pool initializer: share the exact Bell prefix built by the parent"""
    if bell_values:
        bell_triangle.seed(bell_values)


def run_chunk(task: Tuple[str, Sequence[int], int]) -> List[VerificationRecord]:
    check_id, ns, precision = task
    return [run_check(check_id, n, precision) for n in ns]
