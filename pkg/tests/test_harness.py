import json

import pytest
from mpmath import mpf

from bellcert.certified_bounds import Verdict
from bellcert.exceptions import ConfigError, ResourceLimitError, ValidityError
from bellcert.harness import emit
from bellcert.harness.checks import CHECKS, Q_REGIME_FROM, Check, run_check, scaled_error
from bellcert.harness.runner import (
    EXIT_FAIL,
    EXIT_INDETERMINATE,
    EXIT_OK,
    RunConfig,
    epsilon_scan,
    estimate_command,
    exit_status,
    lambertw_command,
    plan_checks,
    ratio_command,
    trend_report,
    verify_range,
)
from bellcert.precision import HPReal

PREC = 128


def _run(theorems, n_from, n_to, jobs=1):
    return verify_range(RunConfig(theorems=theorems, n_from=n_from, n_to=n_to, precision=PREC, jobs=jobs))


def test_q_regime_starts_at_742():
    assert Q_REGIME_FROM == 742


def test_every_check_passes_on_a_small_range():
    records = _run(("all",), 1, 40)
    assert records
    assert {record.verdict for record in records} == {Verdict.PASS}
    assert exit_status(records) == EXIT_OK


@pytest.mark.parametrize("check_id", ["e-upper", "scaled-error-sign", "q-range", "q-margin", "q-step"])
def test_checks_pass_at_their_first_index(check_id):
    start = CHECKS[check_id].valid_from
    for n in (start, start + 1):
        assert run_check(check_id, n, PREC).verdict is Verdict.PASS


@pytest.mark.parametrize("check_id", ["e-vs-estar", "e-ratio", "q-range", "q-step"])
def test_checks_without_exact_values_run_past_the_cap(check_id, small_cap):
    assert not CHECKS[check_id].needs_exact
    records = _run((check_id,), 10 ** 5, 10 ** 5 + 2)
    assert [record.verdict for record in records] == [Verdict.PASS] * 3


def test_exact_checks_respect_the_cap(small_cap):
    with pytest.raises(ResourceLimitError) as excinfo:
        _run(("second-order",), 1, small_cap + 1)
    assert "lower --to" in str(excinfo.value)


def test_plan_clamps_to_proven_range():
    plans = {plan.check_id: plan for plan in plan_checks(RunConfig(theorems=("all",), n_from=1, n_to=800))}
    assert plans["e-upper"].clamped and plans["e-upper"].n_from == 311
    assert plans["relative-error"].n_from == 11
    assert plans["q-step"].n_from == 742
    assert not plans["second-order"].clamped


def test_records_are_sorted_and_cover_the_range():
    records = _run(("bell-ratio", "estar"), 1, 30)
    keys = [(record.theorem, record.n) for record in records]
    assert keys == sorted(keys)
    assert [r.n for r in records if r.theorem == "estar"] == list(range(2, 31))


def test_worker_pool_matches_sequential_output():
    sequential = emit.emit_records(_run(("second-order", "bell-ratio"), 1, 150), "csv")
    parallel = emit.emit_records(_run(("second-order", "bell-ratio"), 1, 150, jobs=2), "csv")
    assert sequential == parallel


def test_output_is_deterministic():
    first = emit.emit_records(_run(("estar",), 2, 60), "json")
    second = emit.emit_records(_run(("estar",), 2, 60), "json")
    assert first == second
    rows = json.loads(first)
    assert rows[0]["theorem"] == "estar" and rows[0]["n"] == 2


def test_failing_check_sets_exit_status(monkeypatch):
    def broken(n, precision):
        return HPReal.exact(0, precision), HPReal.exact(2, precision), HPReal.exact(1, precision)

    monkeypatch.setitem(CHECKS, "second-order", Check("second-order", "broken", 1, False, broken))
    records = _run(("second-order",), 1, 3)
    assert {record.verdict for record in records} == {Verdict.FAIL}
    assert exit_status(records) == EXIT_FAIL


def test_undecided_check_escalates_then_reports_indeterminate(monkeypatch):
    def fuzzy(n, precision):
        return HPReal.exact(0, precision), HPReal(mpf(-1), mpf(1), precision), HPReal.exact(1, precision)

    monkeypatch.setitem(CHECKS, "second-order", Check("second-order", "fuzzy", 1, False, fuzzy))
    record = run_check("second-order", 5, 64)
    assert record.verdict is Verdict.INDETERMINATE
    assert record.precision_used == 64 * 2 ** 4
    assert exit_status([record]) == EXIT_INDETERMINATE


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(n_from=10, n_to=5).validate()
    with pytest.raises(ConfigError):
        RunConfig(theorems=("nope",)).validate()
    with pytest.raises(ConfigError):
        RunConfig(fmt="xml").validate()
    with pytest.raises(ConfigError):
        RunConfig(jobs=0).validate()


def test_trend_report_rows():
    rows = trend_report([2000, 500, 1000], PREC)
    assert [row.n for row in rows] == [500, 1000, 2000]
    assert rows[0].approaching is None
    for row in rows:
        assert row.a_n.hi < 0
        assert row.band_lo.lo <= row.a_n.lo and row.a_n.hi <= row.band_hi.hi
    assert set(rows[1].as_row()) == set(emit.TREND_COLUMNS)
    with pytest.raises(ValidityError):
        trend_report([1], PREC)


def test_scaled_error_is_negative_past_311():
    assert scaled_error(400, PREC).hi < 0


def test_estimate_modes():
    assert estimate_command(10, "exact")["value"] == "115975"
    assert estimate_command(10, "digits", PREC)["digits_lo"] == 6
    log_report = estimate_command(10, "log", PREC)
    assert log_report["value"].startswith("11.661")
    enclosure = estimate_command(10 ** 5, "enclosure", PREC)
    assert enclosure["theorem"] == "best"
    with pytest.raises(ResourceLimitError):
        estimate_command(10 ** 6, "exact")
    with pytest.raises(ConfigError):
        estimate_command(10, "float")


def test_ratio_and_lambertw_reports():
    report = ratio_command(100, PREC)
    assert report["verdict"] == "PASS"
    w = lambertw_command("1", PREC)
    assert w["w"].startswith("0.56714329040978")
    assert w["precision_bits"] == PREC


def test_epsilon_scan_grid():
    reports = epsilon_scan(5, 7, 3, precision=PREC)
    assert [round(float(report.r), 6) for report in reports] == [5.0, 6.0, 7.0]
    with pytest.raises(ValidityError):
        epsilon_scan(4, 6, 3)
    with pytest.raises(ConfigError):
        epsilon_scan(6, 5, 3)


def test_emitters():
    assert emit.emit_rows([], emit.RECORD_COLUMNS, "table") == "(no rows)\n"
    assert emit.emit_rows([], emit.RECORD_COLUMNS, "csv").startswith("theorem,n,lo,value,hi,verdict")
    records = _run(("bell-ratio",), 1, 3)
    assert emit.summarize(records) == {"PASS": 3, "FAIL": 0, "INDETERMINATE": 0}
    table = emit.emit_records(records, "table")
    assert "bell-ratio" in table and "PASS" in table


@pytest.mark.slow
@pytest.mark.parametrize("check_id, n_from", [("e-vs-estar", 1), ("e-ratio", 1),
                                               ("q-range", 742), ("q-margin", 742), ("q-step", 742)])
def test_exact_free_checks_up_to_one_hundred_thousand(check_id, n_from):
    records = _run((check_id,), n_from, 10 ** 5, jobs=4)
    assert exit_status(records) == EXIT_OK
