"""Underwater launch-phase dynamics with the coupled heave/pitch added-mass terms."""

import logging
from typing import Optional

import numpy as np

from engines.environment import EnvironmentModel
from engines.errors import ParameterError
from engines.vehicle import AddedMassSet, CoefficientProvider, VehicleParams
from .fluid import longitudinal_fluid_forces
from .state import ControlLike, StateLike, control_array, state_array

logger = logging.getLogger(__name__)


class LaunchPhaseModel:
    """Longitudinal motion fully submerged, control u = [T].

    The heave and pitch equations share Z_qdot*qdot and M_wdot*wdot, so they are
    solved together through the reduced mass matrix
    [[m - Z_wdot, -Z_qdot], [-M_wdot, I_y - M_qdot]].
    """

    name = "launch"
    n_controls = 1

    def __init__(
        self,
        params: VehicleParams,
        added: AddedMassSet,
        env: EnvironmentModel,
        provider: Optional[CoefficientProvider] = None,
    ):
        self.params = params
        self.added = added
        self.env = env
        self.provider = provider or CoefficientProvider.analytic()
        self.weight = params.weight(env)
        self.buoyancy = params.buoyancy(env)

        reduced = np.array([
            [params.mass - added.z_wdot, -added.z_qdot],
            [-added.m_wdot, params.i_y - added.m_qdot],
        ])
        det = np.linalg.det(reduced)
        if abs(det) < 1e-9 * abs(reduced[0, 0] * reduced[1, 1]) or not np.isfinite(det):
            raise ParameterError(f"heave/pitch mass matrix is singular (det = {det:.3g})")
        self._reduced_inverse = np.linalg.inv(reduced)
        self._axial_mass = params.mass - added.x_udot
        if self._axial_mass <= 0:
            raise ParameterError(f"axial mass m - X_udot must be positive, got {self._axial_mass}")
        logger.debug(f"LaunchPhaseModel initialized (W={self.weight:.1f} N, B={self.buoyancy:.1f} N)")

    def derivative(self, x: StateLike, controls: ControlLike) -> np.ndarray:
        x = state_array(x)
        thrust = control_array(controls, self.n_controls)[0]
        u, w, q, theta, _ = x
        p, a = self.params, self.added
        m = p.mass
        net = self.weight - self.buoyancy

        fx, fz, fm = longitudinal_fluid_forces(self.provider, p, self.env.water_density, u, w, q, 0.0)
        s_theta, c_theta = np.sin(theta), np.cos(theta)
        X = fx + thrust - net * s_theta
        Z = fz + net * c_theta
        M = fm + p.x_b * self.buoyancy * c_theta

        u_dot = (X - m * w * q + a.z_wdot * w * q + a.z_qdot * q**2) / self._axial_mass
        rhs_w = Z + m * q * u - a.x_udot * q * u
        rhs_q = M - a.z_wdot * w * u - a.z_qdot * q * u + a.x_udot * u * w
        inv = self._reduced_inverse
        w_dot = inv[0, 0] * rhs_w + inv[0, 1] * rhs_q
        q_dot = inv[1, 0] * rhs_w + inv[1, 1] * rhs_q
        z_dot = -s_theta * u + c_theta * w
        return np.stack([u_dot, w_dot, q_dot, q + 0.0 * u, z_dot])


def launch_derivative(
    x: StateLike,
    T: ControlLike,
    params: VehicleParams,
    added: AddedMassSet,
    env: EnvironmentModel,
    provider: Optional[CoefficientProvider] = None,
) -> np.ndarray:
    return LaunchPhaseModel(params, added, env, provider).derivative(x, T)
