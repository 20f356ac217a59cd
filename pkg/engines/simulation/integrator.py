"""Fixed-step classical RK4 propagation with surface-crossing detection."""

import logging
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from engines.errors import HydroboostError, IntegrationError, ParameterError
from .trajectory import ControlProgram, Event, HoldMode, Trajectory

logger = logging.getLogger(__name__)

Derivative = Callable[[np.ndarray, np.ndarray], np.ndarray]


class IntegratorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    step: float = Field(0.02, gt=0, description="RK4 step (s); must divide the control spacing")
    hold: HoldMode = "linear"


def rk4_step(f: Derivative, x: np.ndarray, u0, u_mid, u1, h: float) -> np.ndarray:
    """One classical Runge-Kutta step with the control at the start, middle and end."""
    k1 = f(x, u0)
    k2 = f(x + 0.5 * h * k1, u_mid)
    k3 = f(x + 0.5 * h * k2, u_mid)
    k4 = f(x + h * k3, u1)
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _steps_per_interval(program: ControlProgram, config: IntegratorConfig) -> int:
    n = int(round(program.dt / config.step))
    if n < 1 or abs(n * config.step - program.dt) > 1e-9:
        raise ParameterError(f"integrator step {config.step} must divide the control spacing {program.dt}")
    return n


def _advance(f: Derivative, x: np.ndarray, t: float, h: float, program: ControlProgram,
             hold: HoldMode) -> np.ndarray:
    try:
        with np.errstate(over="raise", invalid="raise"):
            x_next = rk4_step(f, x, program.at(t, hold), program.at(t + 0.5 * h, hold),
                              program.at(t + h, hold), h)
    except (HydroboostError, FloatingPointError, np.linalg.LinAlgError) as e:
        raise IntegrationError(f"derivative evaluation failed: {e}", time=t) from e
    if not np.all(np.isfinite(x_next)):
        raise IntegrationError("state became non-finite", time=t)
    return x_next


def _default_names(x0: np.ndarray, state_names: Optional[Sequence[str]]) -> Sequence[str]:
    if state_names is not None:
        return state_names
    return tuple(f"x{i}" for i in range(len(x0)))


def integrate(
    derivative: Derivative,
    x0: Sequence[float],
    control_program: ControlProgram,
    t_f: float,
    config: Optional[IntegratorConfig] = None,
    state_names: Optional[Sequence[str]] = None,
    control_names: Sequence[str] = ("T", "theta_T"),
) -> Trajectory:
    """Propagate x' = f(x, u(t)) from 0 to t_f on the fixed RK4 grid."""
    config = config or IntegratorConfig()
    _steps_per_interval(control_program, config)
    x = np.asarray(x0, dtype=float)
    n_steps = int(round(t_f / config.step))
    if n_steps < 1 or abs(n_steps * config.step - t_f) > 1e-9 * max(1.0, t_f):
        raise ParameterError(f"t_f = {t_f} must be a positive multiple of the integrator step {config.step}")

    times = [0.0]
    states = [x]
    controls = [control_program.at(0.0, config.hold)]
    for i in range(n_steps):
        t = i * config.step
        x = _advance(derivative, x, t, config.step, control_program, config.hold)
        times.append((i + 1) * config.step)
        states.append(x)
        controls.append(control_program.at(times[-1], config.hold))

    logger.debug(f"Integrated {n_steps} RK4 steps to t={t_f:.3f} s")
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        controls=np.array(controls),
        state_names=_default_names(x, state_names),
        control_names=control_names,
        events=[Event(float(times[-1]), "final_time")],
    )


def simulate_to_surface(
    derivative: Derivative,
    x0: Sequence[float],
    control_program: ControlProgram,
    t_max: float,
    config: Optional[IntegratorConfig] = None,
    state_names: Optional[Sequence[str]] = None,
    control_names: Sequence[str] = ("T", "theta_T"),
    depth_index: int = -1,
) -> Trajectory:
    """Propagate until the depth component first reaches zero, or until t_max.

    The crossing is placed by linear interpolation inside the step that brackets
    it and recorded as a ``surface_crossing`` event.
    """
    config = config or IntegratorConfig()
    _steps_per_interval(control_program, config)
    x = np.asarray(x0, dtype=float)
    names = _default_names(x, state_names)
    u0 = control_program.at(0.0, config.hold)

    if x[depth_index] <= 0.0:
        logger.info("Initial state already at or above the surface")
        return Trajectory(np.array([0.0]), x[None, :], u0[None, :], names, control_names,
                          [Event(0.0, "surface_crossing")])

    times, states, controls = [0.0], [x], [u0]
    n_steps = int(np.ceil(t_max / config.step - 1e-9))
    for i in range(n_steps):
        t = i * config.step
        h = min(config.step, t_max - t)
        x_next = _advance(derivative, x, t, h, control_program, config.hold)
        if x_next[depth_index] <= 0.0:
            frac = x[depth_index] / (x[depth_index] - x_next[depth_index])
            t_cross = t + frac * h
            x_cross = x + frac * (x_next - x)
            x_cross[depth_index] = 0.0
            times.append(t_cross)
            states.append(x_cross)
            controls.append(control_program.at(t_cross, config.hold))
            logger.info(f"Surface crossing at t={t_cross:.3f} s")
            return Trajectory(np.array(times), np.array(states), np.array(controls), names,
                              control_names, [Event(float(t_cross), "surface_crossing")])
        x = x_next
        times.append(t + h)
        states.append(x)
        controls.append(control_program.at(t + h, config.hold))

    logger.info(f"No surface crossing before t_max={t_max:.2f} s")
    return Trajectory(np.array(times), np.array(states), np.array(controls), names, control_names,
                      [Event(float(times[-1]), "final_time")])
