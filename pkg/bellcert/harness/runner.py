"""
Verification Runner
Plans a verification run, dispatches per-(check, n) work to a worker pool
and assembles the records in a fixed order. Also hosts the reporting
commands that sit on top of the library: trend, estimate, ratio, lambertw
and the epsilon scan.
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from bellcert import config
from bellcert import precision as hp
from bellcert.bell_exact import (
    bell,
    bell_ratio_exact,
    bell_table,
    decimal_digits,
    decimal_string,
    log_bell,
)
from bellcert.certified_bounds import Verdict, best_enclosure, digit_count, ratio_enclosure
from bellcert.epsilon_bounds import OBJECTIVES, EpsilonBoundReport, optimize_epsilon
from bellcert.exceptions import ConfigError, ResourceLimitError, ValidityError
from bellcert.harness.checks import (
    CHECKS,
    VerificationRecord,
    init_worker,
    run_chunk,
    scaled_error,
    scaled_error_band,
)
from bellcert.lambert_w import lambert_w
from bellcert.precision import HPReal, ratio

logger = logging.getLogger(__name__)

FORMATS = ("table", "csv", "json")
ESTIMATE_MODES = ("exact", "enclosure", "digits", "log")
CHUNK_SIZE = 64
LIMIT_OF_SCALED_ERROR = (-1, 12)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3


@dataclass
class RunConfig:
    """What to verify, over which indices, at which precision"""
    theorems: Tuple[str, ...] = ("all",)
    n_from: int = 1
    n_to: int = field(default_factory=lambda: config.DEFAULT_N_TO)
    precision: int = field(default_factory=lambda: config.DEFAULT_PRECISION)
    fmt: str = "table"
    jobs: int = field(default_factory=lambda: config.DEFAULT_JOBS)

    def selected(self) -> List[str]:
        if "all" in self.theorems:
            return list(CHECKS)
        return [check_id for check_id in CHECKS if check_id in self.theorems]

    def validate(self) -> None:
        unknown = [t for t in self.theorems if t != "all" and t not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown check id(s): {', '.join(unknown)}")
        if not self.theorems:
            raise ConfigError("no checks selected")
        if self.n_from < 0 or self.n_from > self.n_to:
            raise ConfigError(f"need 0 <= from <= to (got from={self.n_from}, to={self.n_to})")
        if self.precision < 32:
            raise ConfigError(f"precision must be at least 32 bits (got {self.precision})")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS} (got {self.fmt!r})")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be positive (got {self.jobs})")


@dataclass(frozen=True)
class CheckPlan:
    check_id: str
    n_from: int
    n_to: int
    requested_from: int

    @property
    def clamped(self) -> bool:
        return self.n_from != self.requested_from

    @property
    def indices(self) -> range:
        return range(self.n_from, self.n_to + 1)


def plan_checks(run_config: RunConfig) -> List[CheckPlan]:
    """Clamp every selected check to the first index where it is proven"""
    plans = []
    for check_id in run_config.selected():
        check = CHECKS[check_id]
        start = max(run_config.n_from, check.valid_from)
        if start != run_config.n_from:
            logger.info("⚠️ %s clamped to n >= %d", check_id, check.valid_from)
        plans.append(CheckPlan(check_id, start, run_config.n_to, run_config.n_from))
    return plans


def _tasks(plans: Iterable[CheckPlan], precision: int) -> List[Tuple[str, List[int], int]]:
    tasks = []
    for plan in plans:
        indices = list(plan.indices)
        for i in range(0, len(indices), CHUNK_SIZE):
            tasks.append((plan.check_id, indices[i:i + CHUNK_SIZE], precision))
    return tasks


def verify_range(run_config: RunConfig) -> List[VerificationRecord]:
    """One record per (check, n), sorted by (check id, n)"""
    run_config.validate()
    plans = plan_checks(run_config)

    bell_values: Tuple[int, ...] = ()
    exact_to = max((p.n_to for p in plans if CHECKS[p.check_id].needs_exact and p.indices), default=-1)
    if exact_to >= 0:
        if exact_to > config.MAX_BELL_INDEX:
            raise ResourceLimitError(exact_to, config.MAX_BELL_INDEX,
                                     hint="lower --to or run only the checks that need no exact B_n")
        bell_values = bell_table(exact_to).values

    tasks = _tasks(plans, run_config.precision)
    logger.info("🔍 Verifying %d checks in %d chunks with %d job(s)", len(plans), len(tasks), run_config.jobs)

    records: List[VerificationRecord] = []
    if run_config.jobs == 1:
        for task in tasks:
            records.extend(run_chunk(task))
    else:
        with Pool(processes=run_config.jobs, initializer=init_worker, initargs=(bell_values,)) as pool:
            for chunk in pool.imap_unordered(run_chunk, tasks):
                records.extend(chunk)

    records.sort(key=lambda record: (record.theorem, record.n))
    logger.info("✅ %d records", len(records))
    return records


def exit_status(records: Sequence[VerificationRecord]) -> int:
    verdicts = {record.verdict for record in records}
    if Verdict.FAIL in verdicts:
        return EXIT_FAIL
    if Verdict.INDETERMINATE in verdicts:
        return EXIT_INDETERMINATE
    return EXIT_OK


@dataclass(frozen=True)
class TrendRow:
    n: int
    a_n: HPReal
    band_lo: HPReal
    band_hi: HPReal
    gap_to_limit: HPReal
    approaching: Optional[bool]

    def as_row(self) -> Dict:
        return {
            "n": self.n,
            "a_n": hp.format_real(self.a_n.value),
            "band_lo": hp.format_real(self.band_lo.lo),
            "band_hi": hp.format_real(self.band_hi.hi),
            "gap_to_limit": hp.format_real(self.gap_to_limit.value),
            "approaching": "" if self.approaching is None else str(self.approaching).lower(),
        }


def trend_report(ns: Sequence[int], precision: Optional[int] = None) -> List[TrendRow]:
    """
    a_n = (n / ln n)(B_n / E_n - 1) next to the band the second-order
    enclosure implies, and its distance to the limit -1/12
    """
    precision = precision or config.DEFAULT_PRECISION
    ordered = sorted(set(ns))
    if ordered and ordered[0] < 2:
        raise ValidityError(f"n >= 2 (got n={ordered[0]})", valid_from=2)
    limit = ratio(*LIMIT_OF_SCALED_ERROR, precision)

    rows: List[TrendRow] = []
    previous_gap = None
    for n in ordered:
        a_n = scaled_error(n, precision)
        band_lo, band_hi = scaled_error_band(n, precision)
        gap = a_n - limit
        approaching = None
        if previous_gap is not None:
            approaching = abs(gap).hi < abs(previous_gap).lo
        rows.append(TrendRow(n, a_n, band_lo, band_hi, gap, approaching))
        previous_gap = gap
    return rows


def estimate_command(n: int, mode: str, precision: Optional[int] = None) -> Dict:
    """B_n as an exact integer, a certified enclosure of ln B_n, a digit count, or ln B_n"""
    if mode not in ESTIMATE_MODES:
        raise ConfigError(f"mode must be one of {ESTIMATE_MODES} (got {mode!r})")
    precision = precision or config.DEFAULT_PRECISION

    if mode in ("exact", "log") and n > config.MAX_BELL_INDEX:
        raise ResourceLimitError(n, config.MAX_BELL_INDEX, hint="use --mode enclosure or digits")

    if mode == "exact":
        value = bell(n)
        return {"n": n, "mode": mode, "digits": decimal_digits(value), "value": decimal_string(value)}
    if mode == "log":
        value = log_bell(n, precision)
        return {"n": n, "mode": mode, "lo": hp.format_real(value.lo, 20),
                "value": hp.format_real(value.value, 20), "hi": hp.format_real(value.hi, 20)}
    if mode == "digits":
        lo, hi = digit_count(n, precision)
        return {"n": n, "mode": mode, "digits_lo": lo, "digits_hi": hi}
    report = best_enclosure(n, precision).as_dict()
    report["mode"] = mode
    return report


def ratio_command(n: int, precision: Optional[int] = None) -> Dict:
    """Certified interval for B_n / B_{n-1}, compared with the exact ratio when it is computable"""
    precision = precision or config.DEFAULT_PRECISION
    enclosure = ratio_enclosure(n, precision)
    report = enclosure.as_dict()
    if n <= config.MAX_BELL_INDEX:
        exact = bell_ratio_exact(n, precision)
        report["exact"] = hp.format_real(exact.value)
        report["verdict"] = enclosure.contains(exact).value
    return report


def lambertw_command(x: str, precision: Optional[int] = None) -> Dict:
    precision = precision or config.DEFAULT_PRECISION
    value = lambert_w(x, precision)
    digits = max(15, int(precision * 0.30103) - 2)
    return {
        "x": x,
        "w": hp.format_real(value.w.value, digits),
        "w_lo": hp.format_real(value.w.lo, digits),
        "w_hi": hp.format_real(value.w.hi, digits),
        "residual": hp.format_real(value.residual.hi, 6),
        "tolerance": hp.format_real(value.tolerance, 6),
        "precision_bits": precision,
    }


def epsilon_scan(r_from: float, r_to: float, steps: int, objective: str = "total",
                 precision: Optional[int] = None) -> List[EpsilonBoundReport]:
    """Optimal eps and its bound coefficients on an evenly spaced grid of R"""
    if objective not in OBJECTIVES:
        raise ConfigError(f"objective must be one of {OBJECTIVES} (got {objective!r})")
    if steps < 1 or r_to < r_from:
        raise ConfigError(f"need steps >= 1 and r_from <= r_to (got {steps}, {r_from}, {r_to})")
    if r_from < 5:
        raise ValidityError(f"R >= 5 (got r_from={r_from})")
    grid = np.linspace(r_from, r_to, steps) if steps > 1 else np.array([r_from])
    return [optimize_epsilon(float(r), objective=objective, precision=precision) for r in grid]

