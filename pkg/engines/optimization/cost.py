"""Trapezoidal minimum-effort cost."""

from typing import Optional, Sequence, Union

import numpy as np

from engines.errors import ParameterError
from engines.simulation import ControlProgram

DEFAULT_WEIGHTS = (1.0, 0.0)


def _weights(n_controls: int, weights: Optional[Sequence[float]]) -> np.ndarray:
    values = list(DEFAULT_WEIGHTS if weights is None else weights)
    values = (values + [0.0] * n_controls)[:n_controls]
    return np.asarray(values, dtype=float)


def effort_cost(
    program: Union[ControlProgram, np.ndarray],
    dt: Optional[float] = None,
    weights: Optional[Sequence[float]] = None,
) -> float:
    """J = sum_i r_i dt/2 (u_0^2 + 2(u_1^2 + ... + u_{N-1}^2) + u_N^2)."""
    if isinstance(program, ControlProgram):
        samples, dt = program.samples, program.dt if dt is None else dt
    else:
        samples = np.atleast_2d(np.asarray(program, dtype=float))
    if dt is None or dt <= 0:
        raise ParameterError(f"effort cost needs a positive dt, got {dt}")
    if samples.shape[1] < 2:
        raise ParameterError("effort cost needs at least two samples")
    r = _weights(samples.shape[0], weights)
    squares = samples**2
    trapezoid = 0.5 * dt * (squares[:, 0] + 2.0 * squares[:, 1:-1].sum(axis=1) + squares[:, -1])
    return float(r @ trapezoid)


def effort_gradient(samples: np.ndarray, dt: float, weights: Optional[Sequence[float]] = None) -> np.ndarray:
    """dJ/du for every sample, same shape as ``samples``."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    r = _weights(samples.shape[0], weights)[:, None]
    grad = 2.0 * dt * r * samples
    grad[:, [0, -1]] *= 0.5
    return grad
