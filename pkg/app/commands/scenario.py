"""simulate / optimize commands for single scenario files."""

import logging
from pathlib import Path
from typing import Optional

import numpy as np
import typer
from rich.table import Table

from app.runner import optimize_combined, optimize_scenario, read_program, simulate_scenario
from app.utils import parse_scenario, write_program_csv, write_result_json, write_trajectory_csv
from engines.errors import HydroboostError, ScenarioParseError
from engines.optimization import OptimizationResult
from .common import EXIT_NOT_CONVERGED, EXIT_OK, console, fail, fmt, output_dir

logger = logging.getLogger(__name__)


def _load(path: Path):
    try:
        return parse_scenario(path)
    except ScenarioParseError as e:
        fail(f"{path}: {e}")


def _result_table(result: OptimizationResult) -> Table:
    table = Table(title=f"{result.name or result.phase} ({result.phase})")
    table.add_column("Quantity")
    table.add_column("Value", justify="right")
    table.add_row("status", result.status)
    table.add_row("J (N^2 s)", fmt(result.cost))
    table.add_row("iterations", str(result.iterations))
    table.add_row("max residual", fmt(result.max_residual, ".3e"))
    table.add_row("thrust range (N)", f"{min(result.thrust):.1f} .. {max(result.thrust):.1f}")
    if result.deflection:
        table.add_row("deflection range (deg)",
                      f"{np.degrees(min(result.deflection)):.2f} .. {np.degrees(max(result.deflection)):.2f}")
    for name, value in result.free_parameters.items():
        table.add_row(f"free {name}", fmt(value))
    if result.baseline_cost is not None:
        table.add_row("constant-thrust J", fmt(result.baseline_cost))
    return table


def _write_result(result: OptimizationResult, out: Path, stem: str) -> None:
    write_result_json(result, out / f"{stem}.json")
    write_program_csv(result, out / f"{stem}_program.csv")
    if result.trajectory is not None:
        write_trajectory_csv(result.trajectory, out / f"{stem}_trajectory.csv")


def optimize(
    scenario: Path = typer.Argument(..., exists=True, dir_okay=False, help="Scenario file"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
):
    """Solve the minimum-effort problem of a scenario and export the result."""
    spec = _load(scenario)
    out = output_dir(out)
    try:
        if spec.phase == "combined":
            combined = optimize_combined(spec)
            results = [combined.launch, combined.boost]
            for result, leg in zip(results, ("launch", "boost")):
                console.print(_result_table(result))
                _write_result(result, out, f"{scenario.stem}_{leg}")
            console.print(f"Total J = {combined.total_cost:.6g} N^2 s")
            converged = combined.status == "converged"
        else:
            result = optimize_scenario(spec)
            console.print(_result_table(result))
            _write_result(result, out, scenario.stem)
            converged = result.converged
    except HydroboostError as e:
        logger.error(f"Optimization of {scenario} failed: {e}")
        fail(str(e))
    console.print(f"Results written to {out}")
    raise typer.Exit(code=EXIT_OK if converged else EXIT_NOT_CONVERGED)


def simulate(
    scenario: Path = typer.Argument(..., exists=True, dir_okay=False, help="Scenario file"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
    six_dof: bool = typer.Option(False, "--six-dof", help="Also propagate the full 6-DOF model"),
    closed_loop: bool = typer.Option(False, "--closed-loop", help="Boost only: fly the pitch autopilot"),
    program: Optional[Path] = typer.Option(
        None, "--program", exists=True, dir_okay=False, help="Stored control program (optimize's *_program.csv)"
    ),
):
    """Propagate a scenario under its optimal (or a stored) control program."""
    spec = _load(scenario)
    out = output_dir(out)
    try:
        stored = read_program(program, spec.dt) if program else None
        report = simulate_scenario(spec, stored, six_dof=six_dof, closed_loop=closed_loop)
        write_trajectory_csv(report.trajectory, out / f"{scenario.stem}_trajectory.csv")
        if report.six_dof is not None:
            write_trajectory_csv(report.six_dof, out / f"{scenario.stem}_six_dof.csv")
        if report.closed_loop is not None:
            write_trajectory_csv(report.closed_loop, out / f"{scenario.stem}_closed_loop.csv")
    except HydroboostError as e:
        logger.error(f"Simulation of {scenario} failed: {e}")
        fail(str(e))

    table = Table(title=f"{spec.name} trajectory")
    table.add_column("Quantity")
    table.add_column("Value", justify="right")
    final = report.trajectory
    table.add_row("end time (s)", f"{final.times[-1]:.3f}")
    table.add_row("final u (m/s)", f"{final.component('u')[-1]:.3f}")
    table.add_row("final theta (deg)", f"{np.degrees(final.component('theta')[-1]):.2f}")
    table.add_row("final altitude (m)", f"{-final.component('z')[-1]:.2f}")
    for key, value in report.water_exit.items():
        table.add_row(f"water exit {key}", f"{value:.3f}")
    for key, value in report.differences.items():
        table.add_row(f"6-DOF difference {key}", f"{value:.4g}")
    if report.closed_loop is not None:
        error = np.degrees(np.max(np.abs(report.closed_loop.component("theta") - final.component("theta"))))
        table.add_row("closed-loop max |theta error| (deg)", f"{error:.3f}")
    console.print(table)
    console.print(f"Trajectories written to {out}")
