"""CSV and JSON writers for trajectories, optimization results and sweep tables."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import pandas as pd

from app.models.schemas import CombinedCostReport, SweepRow
from engines.errors import ExportError
from engines.optimization import OptimizationResult
from engines.simulation import Trajectory

logger = logging.getLogger(__name__)

# shortest repr that reads back to the same double
FLOAT_FORMAT = "%.17g"

SWEEP_LEADING = ["value", "cost", "status", "iterations", "max_residual"]
SWEEP_TRAILING = ["baseline_cost", "diagnostics", "error"]
COMBINED_COLUMNS = ["angle_deg", "launch_cost", "boost_cost", "total", "launch_mode", "minimum"]

PathLike = Union[str, Path]


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ExportError(f"cannot create output directory ({e.strerror})", str(path.parent)) from e
    return path


def _write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    path = _prepare(path)
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise ExportError(f"cannot write CSV ({e.strerror})", str(path)) from e
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_trajectory_csv(trajectory: Trajectory, path: PathLike) -> Path:
    """One row per time sample; event kinds in the final column."""
    return _write_frame(trajectory.to_frame(), path)


def result_payload(result: OptimizationResult) -> Dict[str, Any]:
    """JSON-ready dict of an optimization result."""
    payload = result.model_dump(
        include={"name", "phase", "status", "cost", "iterations", "residuals", "free_parameters", "dt", "thrust"}
    )
    ordered = {
        "name": payload["name"],
        "phase": payload["phase"],
        "status": payload["status"],
        "cost": payload["cost"],
        "iterations": payload["iterations"],
        "residuals": payload["residuals"],
        "free_parameters": payload["free_parameters"],
        "dt": payload["dt"],
        "times": result.times,
        "thrust": payload["thrust"],
        "deflection_deg": np.degrees(result.deflection).tolist() if result.deflection else [],
    }
    if result.baseline_cost is not None:
        ordered["baseline_cost"] = result.baseline_cost
    if result.diagnostics:
        ordered["diagnostics"] = list(result.diagnostics)
    return ordered


def write_result_json(result: OptimizationResult, path: PathLike) -> Path:
    path = _prepare(path)
    try:
        path.write_text(json.dumps(result_payload(result), indent=2), encoding="utf-8")
    except OSError as e:
        raise ExportError(f"cannot write JSON ({e.strerror})", str(path)) from e
    logger.info(f"Wrote result '{result.name}' ({result.status}) to {path}")
    return path


def write_program_csv(result: OptimizationResult, path: PathLike) -> Path:
    """Optimal control samples on the optimizer grid."""
    frame = pd.DataFrame({
        "t": result.times,
        "T": result.thrust,
        "theta_T_deg": np.degrees(result.deflection) if result.deflection else np.zeros(len(result.thrust)),
    })
    return _write_frame(frame, path)


def sweep_frame(rows: Sequence[SweepRow], free_names: Sequence[str] = ()) -> pd.DataFrame:
    """Sweep table in declaration order: leading columns, free scalars, then baseline, diagnostics and error."""
    columns = SWEEP_LEADING + list(free_names) + SWEEP_TRAILING
    records: List[Dict[str, Any]] = []
    for row in rows:
        record = {
            "value": row.value,
            "cost": row.cost,
            "status": row.status,
            "iterations": row.iterations,
            "max_residual": row.max_residual,
            "baseline_cost": row.baseline_cost,
            "diagnostics": ";".join(row.diagnostics),
            "error": row.error or "",
        }
        record.update({name: row.free_parameters.get(name) for name in free_names})
        records.append(record)
    return pd.DataFrame(records, columns=columns)


def write_sweep_csv(rows: Sequence[SweepRow], path: PathLike, free_names: Sequence[str] = ()) -> Path:
    return _write_frame(sweep_frame(rows, free_names), path)


def combined_frame(report: CombinedCostReport) -> pd.DataFrame:
    rows = [row.model_dump() for row in report.rows]
    if report.vertical_row is not None:
        rows.append(report.vertical_row.model_dump())
    return pd.DataFrame(rows, columns=COMBINED_COLUMNS)


def write_combined_csv(report: CombinedCostReport, path: PathLike) -> Path:
    return _write_frame(combined_frame(report), path)


def read_table(path: PathLike) -> pd.DataFrame:
    """Read back any CSV written here without losing float precision."""
    return pd.read_csv(path, float_precision="round_trip", keep_default_na=False, na_values=[""])
