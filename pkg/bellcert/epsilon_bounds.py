"""
Epsilon-Parameterised Error Bounds
Right-hand sides of the saddle-point error bounds as functions of the
saddle radius R and the arc half-width eps, plus a derivative-free search
for the eps that minimises them.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from mpmath import mp

from bellcert import config
from bellcert import precision as hp
from bellcert.exceptions import ValidityError
from bellcert.precision import HPReal, Real, as_hpreal, ratio

logger = logging.getLogger(__name__)

OBJECTIVES = ("j1", "total")
# eps^2 e^r stays at least this far from the pole of the j1 bound at 5
FEASIBLE_S_FLOOR = 5.01
SCAN_POINTS = 512
SCAN_PRECISION = 64
GOLDEN_MAX_ITERATIONS = 200
# golden result more than this much above the scan minimum triggers a local refine
SCAN_DISAGREEMENT = 0.01
PHI_RATIO = 2 / (1 + math.sqrt(5))


@dataclass(frozen=True)
class EpsilonBoundReport:
    """Bound terms at (r, eps); the coefficients are the terms divided by e^{-2r}"""
    r: HPReal
    eps: HPReal
    j1_term: HPReal
    j234_term: HPReal
    total_coefficient: HPReal
    objective: Optional[str] = None

    @property
    def c_ratio(self) -> HPReal:
        """eps * e^{r/4}"""
        return self.eps * hp.exp(self.r / 4)

    @property
    def objective_coefficient(self) -> HPReal:
        """The coefficient the search minimised: the main-arc part alone for "j1", else the total"""
        return self.j1_coefficient if self.objective == "j1" else self.total_coefficient

    @property
    def j1_coefficient(self) -> HPReal:
        return self.j1_term * hp.exp(2 * self.r)

    @property
    def j234_coefficient(self) -> HPReal:
        return self.j234_term * hp.exp(2 * self.r)

    def as_row(self) -> Dict[str, str]:
        return {
            "r": hp.format_real(self.r.value),
            "eps": hp.format_real(self.eps.value),
            "c": hp.format_real(self.c_ratio.value),
            "j1_coefficient": hp.format_real(self.j1_coefficient.hi),
            "j234_coefficient": hp.format_real(self.j234_coefficient.hi),
            "total_coefficient": hp.format_real(self.total_coefficient.hi),
            "objective": self.objective or "",
            "objective_coefficient": hp.format_real(self.objective_coefficient.hi),
        }


def _inputs(r: Real, eps: Real, precision: Optional[int]):
    precision = precision or config.DEFAULT_PRECISION
    return as_hpreal(r, precision), as_hpreal(eps, precision), precision


def _check(holds: bool, condition: str) -> None:
    if not holds:
        raise ValidityError(condition)


def j1_error_rhs(r: Real, eps: Real, precision: Optional[int] = None) -> HPReal:
    """
    Bound on the main-arc error:
    sqrt(2/pi)/eps exp(-s/2 - r/2) + (6/5) exp(e^r eps^4/22 - 2r)
    + eps^7 exp(-s/2 + 5r/2) / (30 (s - 5)),  s = eps^2 e^r
    """
    r, eps, precision = _inputs(r, eps, precision)
    _check(r.lo >= 5, f"R >= 5 (got R={r})")
    _check(eps.lo > 0 and eps.hi < 1, f"0 < eps < 1 (got eps={eps})")
    e_r = hp.exp(r)
    s = eps ** 2 * e_r
    _check(s.lo > 5, f"eps^2 e^R > 5 (got {s})")

    half_s = s / 2
    first = hp.sqrt(2 / hp.pi(precision)) / eps * hp.exp(-half_s - r / 2)
    second = ratio(6, 5, precision) * hp.exp(e_r * eps ** 4 / 22 - 2 * r)
    third = eps ** 7 * hp.exp(-half_s + 5 * r / 2) / (30 * (s - 5))
    return first + second + third


def j23_rhs(r: Real, eps: Real, precision: Optional[int] = None) -> HPReal:
    """exp(e^r (cos eps - 1) - r (1 - eps^2) / 2) for 0 < eps < 1/2, r >= 5"""
    r, eps, precision = _inputs(r, eps, precision)
    _check(r.lo >= 5, f"R >= 5 (got R={r})")
    _check(eps.lo > 0 and eps.hi < ratio(1, 2, precision).lo, f"0 < eps < 1/2 (got eps={eps})")
    return hp.exp(hp.exp(r) * (hp.cos(eps) - 1) - r * (1 - eps ** 2) / 2)


def j4_rhs(r: Real, eps: Real, precision: Optional[int] = None) -> HPReal:
    """3 [exp(e^r (cos eps - 1) - r/2) + r exp(-2 e^r / r + r/2)] for r >= 4, eps < 1/2"""
    r, eps, precision = _inputs(r, eps, precision)
    _check(r.lo >= 4, f"R >= 4 (got R={r})")
    _check(eps.lo > 0 and eps.hi < ratio(1, 2, precision).lo, f"0 < eps < 1/2 (got eps={eps})")
    e_r = hp.exp(r)
    return 3 * (hp.exp(e_r * (hp.cos(eps) - 1) - r / 2) + r * hp.exp(-2 * e_r / r + r / 2))


def j234_rhs(r: Real, eps: Real, precision: Optional[int] = None) -> HPReal:
    """4 exp(-(11/24) eps^2 e^r - 3r/8) + 3r exp(-2 e^r / r + r/2) for r >= 5, 0 < eps < 1/2"""
    r, eps, precision = _inputs(r, eps, precision)
    _check(r.lo >= 5, f"R >= 5 (got R={r})")
    _check(eps.lo > 0 and eps.hi < ratio(1, 2, precision).lo, f"0 < eps < 1/2 (got eps={eps})")
    e_r = hp.exp(r)
    s = eps ** 2 * e_r
    return (4 * hp.exp(-ratio(11, 24, precision) * s - ratio(3, 8, precision) * r)
            + 3 * r * hp.exp(-2 * e_r / r + r / 2))


def total_error_coefficient(r: Real, eps: Real, precision: Optional[int] = None,
                            objective: Optional[str] = None) -> EpsilonBoundReport:
    """(j1 + j234) e^{2r}, the constant in front of e^{-2r}"""
    r, eps, precision = _inputs(r, eps, precision)
    j1 = j1_error_rhs(r, eps, precision)
    j234 = j234_rhs(r, eps, precision)
    coefficient = (j1 + j234) * hp.exp(2 * r)
    return EpsilonBoundReport(r=r, eps=eps, j1_term=j1, j234_term=j234,
                              total_coefficient=coefficient, objective=objective)


def standard_epsilon(r: Real, precision: Optional[int] = None) -> HPReal:
    """eps = 1.5 e^{-r/4}"""
    precision = precision or config.DEFAULT_PRECISION
    r = as_hpreal(r, precision)
    return ratio(3, 2, precision) * hp.exp(-r / 4)


def _objective_function(r: HPReal, objective: str) -> Callable[[float], float]:
    """Coefficient to minimise as a float function of ln eps"""
    r_scan = HPReal.exact(r.value, SCAN_PRECISION)
    scale = hp.exp(2 * r_scan)

    def evaluate(log_eps: float) -> float:
        eps = HPReal.exact(mp.exp(log_eps), SCAN_PRECISION)
        try:
            term = j1_error_rhs(r_scan, eps, SCAN_PRECISION)
            if objective == "total":
                term = term + j234_rhs(r_scan, eps, SCAN_PRECISION)
        except ValidityError:
            return math.inf
        return float(term * scale)

    return evaluate


def golden_section(f: Callable[[float], float], lower: float, upper: float,
                   tol: float = 1e-6, max_iterations: int = GOLDEN_MAX_ITERATIONS) -> Dict[str, float]:
    """Minimise a unimodal f on [lower, upper]"""
    x1 = upper - PHI_RATIO * (upper - lower)
    x2 = lower + PHI_RATIO * (upper - lower)
    f1, f2 = f(x1), f(x2)
    iteration = 0
    while iteration < max_iterations and abs(upper - lower) > tol:
        if f2 > f1:
            upper, x2, f2 = x2, x1, f1
            x1 = upper - PHI_RATIO * (upper - lower)
            f1 = f(x1)
        else:
            lower, x1, f1 = x1, x2, f2
            x2 = lower + PHI_RATIO * (upper - lower)
            f2 = f(x2)
        iteration += 1
    argmin = 0.5 * (lower + upper)
    return {"argmin": argmin, "minimum": f(argmin), "iterations": iteration,
            "converged": iteration < max_iterations}


def feasible_log_eps(r: HPReal) -> Tuple[float, float]:
    """Search interval for ln eps: eps^2 e^r >= 5.01 and eps < 1/2"""
    lower = 0.5 * (math.log(FEASIBLE_S_FLOOR) - float(r))
    upper = math.log(0.5 * (1 - 2.0 ** -20))
    return lower, upper


def optimize_epsilon(r: Real, objective: str = "j1", precision: Optional[int] = None,
                     tolerance: float = 1e-6) -> EpsilonBoundReport:
    """
    eps minimising the chosen bound coefficient at radius r.

    "total" minimises (j1 + j234) e^{2r}. "j1" minimises the main-arc part
    alone; its report still carries the total at that eps, which is then an
    evaluation and not a minimum. `objective_coefficient` is always the
    minimised quantity.

    Golden-section search in ln eps, cross-checked against a 512-point scan;
    if the two disagree by more than 1% the search is rerun around the scan
    minimum.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES} (got {objective!r})")
    precision = precision or config.DEFAULT_PRECISION
    r = as_hpreal(r, precision)
    if r.lo < 5:
        raise ValidityError(f"R >= 5 (got R={r})")

    f = _objective_function(r, objective)
    lower, upper = feasible_log_eps(r)
    # relative tolerance on eps is an absolute one on ln eps
    best = golden_section(f, lower, upper, tol=tolerance)

    grid = np.linspace(lower, upper, SCAN_POINTS)
    values = np.array([f(float(t)) for t in grid])
    i = int(np.argmin(values))
    if best["minimum"] > values[i] * (1 + SCAN_DISAGREEMENT):
        logger.warning("⚠️ Golden-section minimum %.6g above scan minimum %.6g at r=%s, refining",
                       best["minimum"], values[i], r)
        refined = golden_section(f, float(grid[max(i - 1, 0)]),
                                 float(grid[min(i + 1, SCAN_POINTS - 1)]), tol=tolerance)
        best = refined if refined["minimum"] <= values[i] else {"argmin": float(grid[i]),
                                                                 "minimum": float(values[i])}

    eps = HPReal.exact(mp.exp(best["argmin"]), precision)
    report = total_error_coefficient(r, eps, precision, objective=objective)
    logger.info("✅ r=%s: eps=%s C=%s %s coefficient=%s", r, eps, report.c_ratio, objective,
                report.objective_coefficient)
    return report
