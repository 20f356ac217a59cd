"""sweep / combine commands."""

import logging
from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from app.runner import combined_cost, costs_from_sweep, run_sweep
from app.runner.sweep import free_parameter_names, resolve_jobs
from app.utils import parse_sweep, read_table, write_combined_csv, write_sweep_csv
from engines.errors import AlignmentError, ExportError, ScenarioParseError
from .common import console, fail, fmt, output_dir

logger = logging.getLogger(__name__)


def sweep(
    sweepfile: Path = typer.Argument(..., exists=True, dir_okay=False, help="Sweep file"),
    jobs: Optional[int] = typer.Option(None, "--jobs", min=1, help="Concurrent sweep points (HYDROBOOST_JOBS wins)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
):
    """Solve the base scenario once per swept value and write the table."""
    try:
        spec = parse_sweep(sweepfile)
    except ScenarioParseError as e:
        fail(f"{sweepfile}: {e}")

    fallback = str(sweepfile.parent / spec.out) if spec.out else None
    directory = output_dir(out, fallback)
    rows = run_sweep(spec, resolve_jobs(jobs))
    free_names = free_parameter_names(spec)
    try:
        path = write_sweep_csv(rows, directory / f"{sweepfile.stem}.csv", free_names)
    except ExportError as e:
        fail(str(e))

    table = Table(title=f"Sweep over {spec.parameter} ({spec.base.name})")
    for column in ["value", "J", "status", "iterations", "max residual", *free_names, "constant-thrust J"]:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(
            fmt(row.value),
            fmt(row.cost),
            row.status if not row.error else f"[red]{row.status}[/red]",
            str(row.iterations),
            fmt(row.max_residual, ".2e"),
            *[fmt(row.free_parameters.get(name)) for name in free_names],
            fmt(row.baseline_cost),
        )
    console.print(table)
    console.print(f"Sweep table written to {path}")


def combine(
    launch_table: Path = typer.Argument(..., exists=True, dir_okay=False, help="theta_exit sweep CSV, launch"),
    boost_table: Path = typer.Argument(..., exists=True, dir_okay=False, help="theta_exit sweep CSV, boost"),
    vertical_cost: Optional[float] = typer.Option(None, "--vertical-cost", help="Vertical-launch J for the 90 deg row"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
):
    """Add launch and boost costs per water-exit angle."""
    try:
        report = combined_cost(
            costs_from_sweep(read_table(launch_table)),
            costs_from_sweep(read_table(boost_table)),
            vertical_launch_cost=vertical_cost,
        )
        path = write_combined_csv(report, output_dir(out) / "combined_cost.csv")
    except (AlignmentError, ExportError, KeyError) as e:
        fail(str(e))

    table = Table(title="Launch + boost cost per water-exit angle")
    for column in ["angle (deg)", "launch", "launch J", "boost J", "total"]:
        table.add_column(column, justify="right")
    rows = report.rows + ([report.vertical_row] if report.vertical_row else [])
    for row in rows:
        style = "bold green" if row.minimum else None
        table.add_row(fmt(row.angle_deg), row.launch_mode, fmt(row.launch_cost), fmt(row.boost_cost),
                      fmt(row.total), style=style)
    console.print(table)
    console.print(f"Minimum total at {report.best_angle_deg:g} deg; written to {path}")
