"""Batch sweeps: one independent solve per value, rows returned in input order."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from app.config import settings
from app.models.schemas import ScenarioSpec, SweepRow, SweepSpec
from engines.errors import HydroboostError
from .scenario_runner import optimize_combined, optimize_scenario

logger = logging.getLogger(__name__)


def apply_sweep_value(base: ScenarioSpec, parameter: str, value: float,
                      t_f: Optional[float] = None) -> ScenarioSpec:
    """Copy of ``base`` with the swept quantity (and optionally t_f) replaced.

    ``theta_exit`` is in degrees: the terminal pitch of a launch, the initial pitch
    of a boost. ``altitude_f`` is metres above the surface.
    """
    initial = list(base.initial)
    terminal = list(base.terminal)
    update: Dict[str, Any] = {}
    if parameter == "theta_exit":
        if base.phase == "boost":
            initial[3] = math.radians(value)
        else:
            terminal[3] = math.radians(value)
    elif parameter == "z0":
        initial[4] = value
    elif parameter == "tf":
        update["t_f"] = value
    elif parameter == "uf":
        terminal[0] = value
    elif parameter == "altitude_f":
        terminal[4] = -value
    else:
        raise ValueError(f"unknown sweep parameter '{parameter}'")
    if t_f is not None:
        update["t_f"] = t_f
    data = base.model_dump()
    data.update(update, initial=tuple(initial), terminal=tuple(terminal), name=f"{base.name}[{parameter}={value:g}]")
    return ScenarioSpec.model_validate(data)


def run_point(task: Tuple[ScenarioSpec, str, float, Optional[float]]) -> SweepRow:
    """Solve one sweep point; every failure becomes a status row."""
    base, parameter, value, t_f = task
    try:
        spec = apply_sweep_value(base, parameter, value, t_f)
        if spec.phase == "combined":
            combined = optimize_combined(spec)
            cost, status = combined.total_cost, combined.status
            iterations = combined.launch.iterations + combined.boost.iterations
            max_residual = max(combined.launch.max_residual, combined.boost.max_residual)
            free = {**combined.launch.free_parameters, **combined.boost.free_parameters}
            baseline = None
            diagnostics = combined.launch.diagnostics + combined.boost.diagnostics
        else:
            result = optimize_scenario(spec)
            cost, status, iterations = result.cost, result.status, result.iterations
            max_residual, free, baseline = result.max_residual, result.free_parameters, result.baseline_cost
            diagnostics = result.diagnostics
        row = SweepRow(
            value=value,
            cost=cost,
            status=status,
            iterations=iterations,
            max_residual=max_residual,
            free_parameters=free,
            baseline_cost=baseline,
            diagnostics=diagnostics,
        )
        if status != "converged":
            logger.warning(f"Sweep point {parameter}={value:g} ended with status {status}")
        else:
            logger.info(f"Sweep point {parameter}={value:g}: J={cost:.6g} ({iterations} iterations)")
        return row
    except (HydroboostError, ValidationError, ValueError) as e:
        message = e.errors()[0]["msg"] if isinstance(e, ValidationError) else str(e).splitlines()[0]
        logger.error(f"Sweep point {parameter}={value:g} failed: {message}")
        return SweepRow(value=value, status="error", error=message)


def resolve_jobs(jobs: Optional[int] = None) -> int:
    """Worker count: HYDROBOOST_JOBS wins over ``jobs``; serial by default."""
    if settings.HYDROBOOST_JOBS is not None:
        return max(1, settings.HYDROBOOST_JOBS)
    return max(1, jobs or 1)


def run_sweep(sweep: SweepSpec, jobs: Optional[int] = None) -> List[SweepRow]:
    """One solve per sweep value; rows come back in the order the values were declared."""
    workers = resolve_jobs(jobs)
    paired = sweep.paired_tf or [None] * len(sweep.values)
    tasks = [(sweep.base, sweep.parameter, value, t_f) for value, t_f in zip(sweep.values, paired)]
    logger.info(f"Running sweep over '{sweep.parameter}' ({len(tasks)} points, {workers} worker(s))")
    if workers == 1 or len(tasks) == 1:
        rows = [run_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            rows = list(pool.map(run_point, tasks))
    failed = sum(row.status == "error" for row in rows)
    logger.info(f"Sweep finished: {len(rows) - failed} solved, {failed} failed")
    return rows


def free_parameter_names(sweep: SweepSpec) -> List[str]:
    return [f.name for f in sweep.base.free_parameters]
