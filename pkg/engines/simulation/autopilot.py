"""LQ pitch-tracking autopilot for the boost phase and its closed-loop simulation."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_continuous_are

from engines.errors import ParameterError
from engines.phases import STATE_NAMES, BoostPhaseModel
from .integrator import IntegratorConfig, integrate
from .trajectory import ControlProgram, Trajectory

logger = logging.getLogger(__name__)

# thrust below this has no steering authority; the loop is parked
MIN_STEERING_THRUST = 1.0


@dataclass(frozen=True)
class PitchAutopilot:
    """theta_T = -K [q, theta - theta_ref, integral(theta - theta_ref)], saturated."""

    gains: np.ndarray
    max_deflection: float
    theta_trim: float
    thrust_trim: float
    speed_trim: float
    a_matrix: np.ndarray
    b_matrix: np.ndarray

    @classmethod
    def synthesize(
        cls,
        model: BoostPhaseModel,
        theta0: float,
        speed: float = 85.0,
        z_trim: float = -300.0,
        thrust_max: float = 30000.0,
        max_deflection: float = np.radians(12.0),
        state_weights: Sequence[float] = (1.0, 10.0, 5.0),
        control_weight: float = 1.0,
    ) -> "PitchAutopilot":
        """Linearize the boost model at (u = speed, theta = theta0, trim thrust) and solve the CARE."""
        params = model.params
        qa = 0.5 * model.air_density(z_trim) * speed**2 * params.reference_area
        axial = model.provider.coefficients(0.0, 0.0, speed / model.env.sound_speed_air)[0, 0]
        thrust = max(model.weight * np.sin(theta0) - qa * axial, 0.2 * thrust_max)

        x_trim = np.array([speed, 0.0, 0.0, theta0, z_trim])
        a_qq = _partial(lambda x: model.derivative(x, [thrust, 0.0])[2], x_trim, 2)
        a_qtheta = _partial(lambda x: model.derivative(x, [thrust, 0.0])[2], x_trim, 3)
        b_q = (model.derivative(x_trim, [thrust, 1e-4])[2] - model.derivative(x_trim, [thrust, -1e-4])[2]) / 2e-4
        if abs(b_q) < 1e-12:
            raise ParameterError("thrust deflection has no pitch authority at the trim point")

        a_matrix = np.array([
            [a_qq, a_qtheta, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
        ])
        b_matrix = np.array([[b_q], [0.0], [0.0]])
        q_matrix = np.diag(state_weights)
        r_matrix = np.array([[control_weight]])
        p_matrix = solve_continuous_are(a_matrix, b_matrix, q_matrix, r_matrix)
        gains = np.linalg.solve(r_matrix, b_matrix.T @ p_matrix).ravel()

        poles = np.linalg.eigvals(a_matrix - b_matrix @ gains[None, :])
        if np.any(poles.real >= 0):
            raise ParameterError(f"autopilot synthesis produced unstable poles {poles}")
        logger.info(
            f"PitchAutopilot synthesized at theta0={np.degrees(theta0):.1f} deg, T={thrust:.0f} N: "
            f"K={np.round(gains, 4).tolist()}, slowest pole {poles.real.max():.3f}"
        )
        return cls(gains, max_deflection, theta0, thrust, speed, a_matrix, b_matrix)

    def closed_loop_matrix(self) -> np.ndarray:
        return self.a_matrix - self.b_matrix @ self.gains[None, :]

    def command(self, q: float, error: float, integral: float, thrust: float) -> Tuple[float, bool]:
        """Deflection command and whether the integrator may run."""
        if thrust < MIN_STEERING_THRUST:
            return 0.0, False
        raw = -float(self.gains @ np.array([q, error, integral]))
        applied = float(np.clip(raw, -self.max_deflection, self.max_deflection))
        return applied, applied == raw


def _partial(f, x: np.ndarray, index: int, h: float = 1e-6) -> float:
    step = np.zeros_like(x)
    step[index] = h * max(1.0, abs(x[index]))
    return float((f(x + step) - f(x - step)) / (2.0 * step[index]))


def closed_loop_boost(
    x0: Sequence[float],
    thrust_program: ControlProgram,
    theta_ref: ControlProgram,
    autopilot: PitchAutopilot,
    t_f: float,
    model: BoostPhaseModel,
    config: Optional[IntegratorConfig] = None,
) -> Trajectory:
    """Thrust open-loop, deflection from the autopilot tracking ``theta_ref``."""
    if abs(thrust_program.dt - theta_ref.dt) > 1e-12 or thrust_program.n_intervals != theta_ref.n_intervals:
        raise ParameterError("thrust program and pitch reference must share the control grid")
    program = ControlProgram(dt=thrust_program.dt,
                             samples=np.vstack([thrust_program.samples[:1], theta_ref.samples[:1]]))

    def augmented(x: np.ndarray, u: np.ndarray) -> np.ndarray:
        thrust, reference = u
        error = x[3] - reference
        deflection, integrating = autopilot.command(x[2], error, x[5], thrust)
        x_dot = model.derivative(x[:5], [thrust, deflection])
        return np.append(x_dot, error if integrating else 0.0)

    start = np.append(np.asarray(x0, dtype=float), 0.0)
    raw = integrate(augmented, start, program, t_f, config, state_names=STATE_NAMES + ("integral",),
                    control_names=("T", "theta_ref"))

    deflections = np.array([
        autopilot.command(x[2], x[3] - u[1], x[5], u[0])[0] for x, u in zip(raw.states, raw.controls)
    ])
    return Trajectory(
        times=raw.times,
        states=raw.states[:, :5],
        controls=np.column_stack([raw.controls[:, 0], deflections]),
        state_names=STATE_NAMES,
        control_names=("T", "theta_T"),
        events=raw.events,
    )
