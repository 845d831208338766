"""
Command-line interface for the Bell toolkit.

Usage:
    python main.py verify --theorem all --from 1 --to 2000
    python main.py estimate --n 10 --mode exact
    python main.py ratio --n 1000
    python main.py lambertw --x 1 --precision 256
    python main.py trend --ns 500,1000,2000
    python main.py eps-scan --r-from 5 --r-to 40 --steps 36

Results go to stdout, diagnostics to stderr.
"""

import contextlib
import json
import logging
import sys
from typing import Optional, Tuple

import click

from bellcert import config
from bellcert.exceptions import (
    BellCertError,
    ConvergenceError,
    EmptyEnclosureError,
    IndeterminateError,
)
from bellcert.harness import emit
from bellcert.harness.checks import CHECKS
from bellcert.harness.runner import (
    ESTIMATE_MODES,
    EXIT_FAIL,
    EXIT_INDETERMINATE,
    EXIT_USAGE,
    FORMATS,
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
from bellcert.epsilon_bounds import OBJECTIVES

__all__ = [
    "cli",
]


def _configure_logging(verbose: bool) -> None:
    level = logging.INFO if verbose else getattr(logging, config.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


@contextlib.contextmanager
def _reported_errors():
    """Map library errors to the documented exit codes"""
    try:
        yield
    except (EmptyEnclosureError, ConvergenceError) as e:
        click.echo(f"❌ {e}", err=True)
        sys.exit(EXIT_FAIL)
    except IndeterminateError as e:
        click.echo(f"⚠️  {e}", err=True)
        sys.exit(EXIT_INDETERMINATE)
    except BellCertError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USAGE)


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2))


def _parse_indices(raw: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {raw!r}", param_hint="--ns")


@click.group()
@click.version_option(version="1.0.0", prog_name="bellcert")
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")
def cli(verbose: bool):
    """
    Certified Bell numbers - exact values, Lambert-W asymptotics and
    machine-checked bounds.
    """
    _configure_logging(verbose)
    if not config.validate_config():
        click.echo("Error: invalid BELL_* settings (see messages above)", err=True)
        sys.exit(EXIT_USAGE)


@cli.command()
@click.option("--theorem", "theorems", multiple=True, default=("all",),
              type=click.Choice(["all", *CHECKS]), help="Check id, repeatable (default: all)")
@click.option("--from", "n_from", type=int, default=1, show_default=True, help="First index")
@click.option("--to", "n_to", type=int, default=None, help="Last index (default: BELL_DEFAULT_N_TO)")
@click.option("--precision", type=int, default=None, help="Working precision in bits")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True)
@click.option("--jobs", type=int, default=None, help="Worker processes (default: BELL_JOBS)")
def verify(theorems: Tuple[str, ...], n_from: int, n_to: Optional[int], precision: Optional[int],
           fmt: str, jobs: Optional[int]):
    """
    Check every selected inequality for each index in the range.

    Exit status: 0 all PASS, 1 any FAIL, 2 usage error, 3 INDETERMINATE.
    """
    run_config = RunConfig(
        theorems=theorems,
        n_from=n_from,
        n_to=config.DEFAULT_N_TO if n_to is None else n_to,
        precision=precision or config.DEFAULT_PRECISION,
        fmt=fmt,
        jobs=jobs or config.DEFAULT_JOBS,
    )
    with _reported_errors():
        run_config.validate()
        for plan in plan_checks(run_config):
            if plan.clamped:
                click.echo(f"⚠️  {plan.check_id} checked from n={plan.n_from} "
                           f"(proven for n >= {CHECKS[plan.check_id].valid_from})", err=True)
        records = verify_range(run_config)

    click.echo(emit.emit_records(records, fmt), nl=False)
    counts = emit.summarize(records)
    status = exit_status(records)
    marker = "✅" if status == 0 else "❌"
    click.echo(f"{marker} {counts['PASS']} PASS, {counts['FAIL']} FAIL, "
               f"{counts['INDETERMINATE']} INDETERMINATE", err=True)
    sys.exit(status)


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Index of the Bell number")
@click.option("--mode", type=click.Choice(ESTIMATE_MODES), default="enclosure", show_default=True)
@click.option("--precision", type=int, default=None, help="Working precision in bits")
def estimate(n: int, mode: str, precision: Optional[int]):
    """Report B_n exactly, as a certified enclosure, as a digit count or as ln B_n."""
    with _reported_errors():
        report = estimate_command(n, mode, precision)
    if mode == "exact":
        click.echo(report["value"])
    else:
        _echo_json(report)


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Index n of B_n / B_{n-1}")
@click.option("--precision", type=int, default=None, help="Working precision in bits")
def ratio(n: int, precision: Optional[int]):
    """Certified interval for the ratio of consecutive Bell numbers."""
    with _reported_errors():
        _echo_json(ratio_command(n, precision))


@cli.command()
@click.option("--x", "x", type=str, required=True, help="Argument x >= 0 (decimal string)")
@click.option("--precision", type=int, default=None, help="Working precision in bits")
def lambertw(x: str, precision: Optional[int]):
    """Certified principal-branch Lambert W(x)."""
    with _reported_errors():
        _echo_json(lambertw_command(x, precision))


@cli.command()
@click.option("--ns", "ns", type=str, required=True, help="Comma-separated indices, e.g. 500,1000,2000")
@click.option("--precision", type=int, default=None, help="Working precision in bits")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True)
def trend(ns: str, precision: Optional[int], fmt: str):
    """Scaled relative error a_n = (n/ln n)(B_n/E_n - 1) and its approach to -1/12."""
    indices = _parse_indices(ns)
    with _reported_errors():
        rows = trend_report(indices, precision)
    click.echo(emit.emit_rows([row.as_row() for row in rows], emit.TREND_COLUMNS, fmt), nl=False)


@cli.command("eps-scan")
@click.option("--r-from", "r_from", type=float, default=5.0, show_default=True)
@click.option("--r-to", "r_to", type=float, default=5.0, show_default=True)
@click.option("--steps", type=int, default=1, show_default=True)
@click.option("--objective", type=click.Choice(OBJECTIVES), default="total", show_default=True,
              help="Minimise the main-arc bound alone or the total bound")
@click.option("--precision", type=int, default=None, help="Working precision in bits")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True)
def eps_scan(r_from: float, r_to: float, steps: int, objective: str, precision: Optional[int], fmt: str):
    """Optimal eps and bound coefficients over a grid of saddle radii R."""
    with _reported_errors():
        reports = epsilon_scan(r_from, r_to, steps, objective, precision)
    click.echo(emit.emit_rows([report.as_row() for report in reports], emit.EPSILON_COLUMNS, fmt), nl=False)
