"""Airborne boost-phase dynamics with small-angle thrust vectoring."""

import logging
from typing import Optional

import numpy as np

from engines.environment import EnvironmentModel
from engines.environment.atmosphere import ISA_CEILING
from engines.vehicle import CoefficientProvider, VehicleParams
from .fluid import longitudinal_fluid_forces
from .state import ControlLike, StateLike, control_array, state_array

logger = logging.getLogger(__name__)


class BoostPhaseModel:
    """Rigid-body longitudinal motion in air, control u = [T, theta_T]; no buoyancy, no added mass."""

    name = "boost"
    n_controls = 2

    def __init__(
        self,
        params: VehicleParams,
        env: EnvironmentModel,
        provider: Optional[CoefficientProvider] = None,
    ):
        self.params = params
        self.env = env
        self.provider = provider or CoefficientProvider.analytic()
        self.weight = params.weight(env)
        logger.debug(f"BoostPhaseModel initialized (W={self.weight:.1f} N, l_x={params.l_x:.4f} m)")

    def air_density(self, z: np.ndarray) -> np.ndarray:
        # density held at the band edge if an iterate strays below the surface or above the ceiling
        return self.env.air_density(np.clip(-np.asarray(z, dtype=float), 0.0, ISA_CEILING))

    def derivative(self, x: StateLike, controls: ControlLike) -> np.ndarray:
        x = state_array(x)
        thrust, deflection = control_array(controls, self.n_controls)
        u, w, q, theta, z = x
        p = self.params
        m = p.mass

        mach = np.hypot(u, w) / self.env.sound_speed_air
        fx, fz, fm = longitudinal_fluid_forces(self.provider, p, self.air_density(z), u, w, q, mach)
        s_theta, c_theta = np.sin(theta), np.cos(theta)

        u_dot = (fx + thrust - self.weight * s_theta - m * w * q) / m
        w_dot = (fz - thrust * deflection + self.weight * c_theta + m * q * u) / m
        q_dot = (fm + thrust * p.l_x * deflection) / p.i_y
        z_dot = -s_theta * u + c_theta * w
        return np.stack([u_dot, w_dot, q_dot, q + 0.0 * u, z_dot])


def boost_derivative(
    x: StateLike,
    ctrl: ControlLike,
    params: VehicleParams,
    env: EnvironmentModel,
    provider: Optional[CoefficientProvider] = None,
) -> np.ndarray:
    return BoostPhaseModel(params, env, provider).derivative(x, ctrl)
