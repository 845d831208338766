import json

import pytest
from click.testing import CliRunner

from bellcert.harness.cli import cli


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def test_estimate_exact(runner):
    result = runner.invoke(cli, ["estimate", "--n", "10", "--mode", "exact"])
    assert result.exit_code == 0
    assert result.stdout == "115975\n"


def test_estimate_digits_as_json(runner):
    result = runner.invoke(cli, ["estimate", "--n", "10", "--mode", "digits"])
    assert result.exit_code == 0
    assert json.loads(result.stdout) == {"n": 10, "mode": "digits", "digits_lo": 6, "digits_hi": 6}


def test_estimate_above_cap_is_a_usage_error(runner):
    result = runner.invoke(cli, ["estimate", "--n", "30000", "--mode", "exact"])
    assert result.exit_code == 2
    assert "--mode enclosure or digits" in result.stderr


def test_verify_csv_passes(runner):
    result = runner.invoke(cli, ["verify", "--theorem", "second-order", "--from", "1", "--to", "25",
                                 "--format", "csv", "--precision", "128"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "theorem,n,lo,value,hi,verdict,precision_bits"
    assert len(lines) == 26
    assert "25 PASS" in result.stderr


def test_verify_reports_clamps_on_stderr(runner):
    result = runner.invoke(cli, ["verify", "--theorem", "e-upper", "--from", "300", "--to", "312",
                                 "--format", "csv", "--precision", "128"])
    assert result.exit_code == 0
    assert "e-upper checked from n=311" in result.stderr
    assert len(result.stdout.splitlines()) == 3


def test_verify_output_is_byte_identical(runner):
    args = ["verify", "--theorem", "estar", "--theorem", "bell-ratio", "--from", "1", "--to", "30",
            "--format", "json", "--precision", "128"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout


def test_verify_bad_range_is_a_usage_error(runner):
    result = runner.invoke(cli, ["verify", "--from", "10", "--to", "5"])
    assert result.exit_code == 2


def test_unknown_theorem_is_a_usage_error(runner):
    result = runner.invoke(cli, ["verify", "--theorem", "nope"])
    assert result.exit_code == 2


def test_lambertw(runner):
    result = runner.invoke(cli, ["lambertw", "--x", "1", "--precision", "256"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["w"].startswith("0.567143290409783872999968662210355549753815787186512508135131")
    assert report["precision_bits"] == 256


def test_lambertw_negative_argument(runner):
    result = runner.invoke(cli, ["lambertw", "--x=-1"])
    assert result.exit_code == 2
    assert "x >= 0" in result.stderr


def test_ratio(runner):
    result = runner.invoke(cli, ["ratio", "--n", "50"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["verdict"] == "PASS"


def test_trend_table(runner):
    result = runner.invoke(cli, ["trend", "--ns", "500,1000", "--precision", "128"])
    assert result.exit_code == 0
    assert "gap_to_limit" in result.stdout.splitlines()[0]


def test_trend_rejects_garbage(runner):
    result = runner.invoke(cli, ["trend", "--ns", "5,x"])
    assert result.exit_code == 2


def test_eps_scan_json(runner):
    result = runner.invoke(cli, ["eps-scan", "--r-from", "5", "--r-to", "6", "--steps", "2",
                                 "--format", "json", "--precision", "128"])
    assert result.exit_code == 0
    rows = json.loads(result.stdout)
    assert [row["r"] for row in rows] == ["5.0", "6.0"]
    assert all(row["objective"] == "total" for row in rows)
    assert all(float(row["total_coefficient"]) <= 1.6 for row in rows)


@pytest.mark.slow
def test_verify_default_range_with_workers(runner):
    result = runner.invoke(cli, ["verify", "--theorem", "all", "--from", "1", "--to", "2000",
                                 "--format", "csv", "--jobs", "4"])
    assert result.exit_code == 0
    assert "0 FAIL" in result.stderr
