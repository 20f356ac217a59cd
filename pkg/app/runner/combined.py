"""Launch + boost cost totals per water-exit angle."""

import logging
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from app.models.schemas import CombinedCostReport, CombinedCostRow
from engines.errors import AlignmentError

logger = logging.getLogger(__name__)

VERTICAL_ANGLE_DEG = 90.0


def _lookup(costs: Mapping[float, float], angle: float, label: str) -> float:
    for key, value in costs.items():
        if np.isclose(key, angle, rtol=0.0, atol=1e-9):
            return float(value)
    raise AlignmentError(f"no {label} cost for water-exit angle {angle:g} deg")


def combined_cost(
    launch_costs: Mapping[float, float],
    boost_costs: Mapping[float, float],
    angles: Optional[Sequence[float]] = None,
    vertical_launch_cost: Optional[float] = None,
) -> CombinedCostReport:
    """Add launch and boost costs angle by angle.

    Args:
        launch_costs: Horizontal-launch minimum cost keyed by water-exit angle (deg)
        boost_costs: Boost minimum cost keyed by initial pitch (deg)
        angles: Angles to report; defaults to the launch angles, which must then match the boost angles
        vertical_launch_cost: Cost of a vertical launch, reported against the 90 deg boost cost

    Returns:
        CombinedCostReport with the minimum-total row flagged
    """
    if not launch_costs or not boost_costs:
        raise AlignmentError("combined cost needs non-empty launch and boost result sets")
    if angles is None:
        launch_angles = sorted(launch_costs)
        boost_angles = sorted(boost_costs)
        if len(launch_angles) != len(boost_angles) or not np.allclose(launch_angles, boost_angles, atol=1e-9):
            raise AlignmentError(f"launch angles {launch_angles} do not match boost angles {boost_angles}")
        angles = launch_angles
    if not angles:
        raise AlignmentError("no water-exit angles to combine")

    rows = []
    for angle in angles:
        launch = _lookup(launch_costs, angle, "launch")
        boost = _lookup(boost_costs, angle, "boost")
        rows.append(CombinedCostRow(angle_deg=angle, launch_cost=launch, boost_cost=boost, total=launch + boost))
    best = min(range(len(rows)), key=lambda i: rows[i].total)
    rows[best] = rows[best].model_copy(update={"minimum": True})

    vertical_row = None
    if vertical_launch_cost is not None:
        boost = _lookup(boost_costs, VERTICAL_ANGLE_DEG, "boost")
        vertical_row = CombinedCostRow(
            angle_deg=VERTICAL_ANGLE_DEG,
            launch_cost=float(vertical_launch_cost),
            boost_cost=boost,
            total=float(vertical_launch_cost) + boost,
            launch_mode="vertical",
        )
    logger.info(f"Combined cost: minimum total {rows[best].total:.6g} at {rows[best].angle_deg:g} deg")
    return CombinedCostReport(rows=rows, best_angle_deg=rows[best].angle_deg, vertical_row=vertical_row)


def costs_from_sweep(frame: pd.DataFrame) -> dict:
    """{value: cost} for the converged rows of a theta_exit sweep table."""
    converged = frame[frame["status"] == "converged"]
    return {float(v): float(c) for v, c in zip(converged["value"], converged["cost"])}
