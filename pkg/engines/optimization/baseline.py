"""Constant-thrust reference solution found by bisection."""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from engines.errors import ParameterError
from .problem import FAILURE_RESIDUAL, TranscribedProblem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaselineResult:
    thrust: float
    cost: float
    residuals: Dict[str, float]
    feasible: bool
    matched: str


def _decision(problem: TranscribedProblem, thrust: float) -> np.ndarray:
    samples = np.zeros((problem.n_controls, problem.n_samples))
    samples[0] = thrust
    for k in range(1, problem.n_controls):
        samples[k] = np.clip(0.0, *problem.control_boxes[k])
    return problem.pack(samples, [f.lower for f in problem.free_parameters])


def _propagating_edge(
    mismatch: Callable[[float], float], ok: float, failing: float, xtol: float
) -> Tuple[float, float]:
    """Thrust nearest ``failing`` that still propagates, and its mismatch.

    Assumes one switch between failing and propagating constants inside the box,
    as when low thrust lets the forward speed decay through zero.
    """
    def propagates(thrust: float) -> float:
        return 1.0 if np.isfinite(mismatch(thrust)) else -1.0

    edge = bisect(propagates, failing, ok, xtol=xtol)
    toward_ok = np.sign(ok - failing)
    for attempt in range(8):
        thrust = float(np.clip(edge + toward_ok * xtol * 2**attempt, min(ok, failing), max(ok, failing)))
        value = mismatch(thrust)
        if np.isfinite(value):
            logger.debug(f"Constant thrust propagates from {thrust:.4f} N toward {ok} N")
            return thrust, value
    return thrust, np.nan


def constant_thrust_baseline(
    problem: TranscribedProblem,
    match: Optional[str] = None,
    constraint_tol: float = 1e-2,
    xtol: float = 1e-3,
) -> Optional[BaselineResult]:
    """Bisect a constant thrust until the ``match`` terminal component is met.

    Other channels sit at zero and free scalars at their lower edge. Returns None
    when the matched residual does not change sign over the thrust box.
    """
    names = problem.residual_names
    if not names:
        raise ParameterError("constant-thrust baseline needs at least one constrained terminal component")
    if match is None:
        match = "u" if "u" in names else names[0]
    if match not in names:
        raise ParameterError(f"component '{match}' is not constrained; choose one of {names}")
    position = names.index(match)

    def mismatch(thrust: float) -> float:
        residuals, failed = problem.residual_matrix(_decision(problem, thrust)[:, None])
        return float(residuals[position, 0]) if not failed[0] else np.nan

    lo, hi = problem.control_boxes[0]
    g_lo, g_hi = mismatch(lo), mismatch(hi)
    if not (np.isfinite(g_lo) or np.isfinite(g_hi)):
        logger.info(f"Baseline for {problem.name or problem.phase}: propagation failed at both thrust bounds")
        return None
    if not np.isfinite(g_lo):
        lo, g_lo = _propagating_edge(mismatch, ok=hi, failing=lo, xtol=xtol)
    elif not np.isfinite(g_hi):
        hi, g_hi = _propagating_edge(mismatch, ok=lo, failing=hi, xtol=xtol)
    if not (np.isfinite(g_lo) and np.isfinite(g_hi)):
        logger.info(f"Baseline for {problem.name or problem.phase}: no propagating thrust next to the failing bound")
        return None
    if g_lo == 0.0:
        thrust = lo
    elif g_hi == 0.0:
        thrust = hi
    elif np.sign(g_lo) == np.sign(g_hi):
        logger.info(f"Baseline for {problem.name or problem.phase}: no sign change of '{match}' over [{lo}, {hi}]")
        return None
    else:
        thrust = bisect(lambda t: np.nan_to_num(mismatch(t), nan=FAILURE_RESIDUAL), lo, hi, xtol=xtol)

    z = _decision(problem, thrust)
    residuals, failed = problem.residual_matrix(z[:, None])
    residuals = residuals[:, 0]
    feasible = bool(not failed[0] and np.all(np.abs(residuals) < constraint_tol))
    result = BaselineResult(
        thrust=float(thrust),
        cost=problem.effort(z),
        residuals={n: float(r) for n, r in zip(names, residuals)},
        feasible=feasible,
        matched=match,
    )
    logger.info(
        f"Baseline for {problem.name or problem.phase}: T={result.thrust:.3f} N, J={result.cost:.6g}, "
        f"feasible={feasible}"
    )
    return result
