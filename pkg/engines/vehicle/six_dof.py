"""Full 6-DOF equations of motion with added mass, restoring, thrust and fluid forces."""

import logging
from typing import Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from engines.environment import EnvironmentModel, Medium, dynamic_pressure, medium_at, total_speed
from engines.errors import ParameterError, SingularityError
from .added_mass import added_mass_terms, rigid_body_terms
from .coefficients import CoefficientProvider
from .forces import aero_hydro_forces, restoring_forces, thrust_forces
from .params import AddedMassSet, BodyState6DOF, VehicleParams

logger = logging.getLogger(__name__)

VERTICAL_LIMIT = np.radians(89.9)


class SixDofOptions(BaseModel):
    """Modelling switches; the defaults give the complete model."""

    model_config = ConfigDict(frozen=True)

    rate_reference: Literal["total_speed", "forward_speed"] = "total_speed"
    small_angle_thrust: bool = False
    added_mass_in_air: bool = False


def euler_kinematics(phi: float, theta: float, p: float, q: float, r: float) -> np.ndarray:
    """ZYX Euler-angle rates; planar pitch-only motion is allowed at the vertical."""
    if abs(theta) >= VERTICAL_LIMIT:
        if p != 0.0 or r != 0.0:
            raise SingularityError(
                f"Euler kinematics singular at theta={np.degrees(theta):.2f} deg with roll/yaw rates present"
            )
        return np.array([0.0, q * np.cos(phi), 0.0])
    s_phi, c_phi = np.sin(phi), np.cos(phi)
    t_theta, c_theta = np.tan(theta), np.cos(theta)
    return np.array([
        p + (q * s_phi + r * c_phi) * t_theta,
        q * c_phi - r * s_phi,
        (q * s_phi + r * c_phi) / c_theta,
    ])


def body_to_ned(phi: float, theta: float, psi: float) -> np.ndarray:
    s_phi, c_phi = np.sin(phi), np.cos(phi)
    s_theta, c_theta = np.sin(theta), np.cos(theta)
    s_psi, c_psi = np.sin(psi), np.cos(psi)
    return np.array([
        [c_psi * c_theta, -s_psi * c_phi + c_psi * s_theta * s_phi, s_psi * s_phi + c_psi * c_phi * s_theta],
        [s_psi * c_theta, c_psi * c_phi + s_phi * s_theta * s_psi, -c_psi * s_phi + s_theta * s_psi * c_phi],
        [-s_theta, c_theta * s_phi, c_theta * c_phi],
    ])


class SixDofModel:
    """Evaluates the 12-state derivative [u, v, w, p, q, r, phi, theta, psi, n, e, z]."""

    def __init__(
        self,
        params: VehicleParams,
        added: AddedMassSet,
        env: EnvironmentModel,
        provider: Optional[CoefficientProvider] = None,
        options: Optional[SixDofOptions] = None,
    ):
        self.params = params
        self.added = added
        self.env = env
        self.provider = provider or CoefficientProvider.analytic()
        self.options = options or SixDofOptions()
        self._weight = params.weight(env)
        self._buoyancy = params.buoyancy(env)

        m_rb, _ = rigid_body_terms(params, np.zeros(6))
        m_a, _ = added_mass_terms(added, np.zeros(6))
        self._mass = {"water": m_rb + m_a, "air": m_rb + m_a if self.options.added_mass_in_air else m_rb}
        for medium, matrix in self._mass.items():
            if np.linalg.cond(matrix) > 1e12:
                raise ParameterError(f"mass matrix M_RB + M_A is singular in {medium}")

    def derivative(self, state: Union[np.ndarray, BodyState6DOF], controls: Sequence[float],
                   medium: Optional[Medium] = None) -> np.ndarray:
        x = state.as_array() if isinstance(state, BodyState6DOF) else np.asarray(state, dtype=float)
        u, v, w, p, q, r, phi, theta, psi = x[:9]
        z = x[11]
        T, theta_T, psi_T = (tuple(controls) + (0.0, 0.0))[:3]
        medium = medium or medium_at(z)
        if abs(theta) >= VERTICAL_LIMIT and v != 0.0:
            raise SingularityError(
                f"lateral velocity v={v:.3g} not supported at theta={np.degrees(theta):.2f} deg"
            )
        params, env = self.params, self.env
        speed = total_speed(u, v, w)

        if medium == "water":
            rho = env.water_density
            buoyancy = self._buoyancy
            mach = 0.0
        else:
            rho = env.air_density(-z)
            buoyancy = 0.0
            mach = speed / env.sound_speed_air

        nu = x[:6]
        alpha = np.arctan2(w, u)
        beta = np.arctan2(v, np.hypot(u, w))
        rate_speed = speed if self.options.rate_reference == "total_speed" else u
        Q = dynamic_pressure(rho, speed)

        tau = (
            aero_hydro_forces(self.provider, Q, params.reference_area, params.diameter,
                              rate_speed, alpha, beta, mach, p, q, r)
            + restoring_forces(self._weight, buoyancy, params.x_b, phi, theta)
            + thrust_forces(T, theta_T, psi_T, params.l_x, self.options.small_angle_thrust)
        ).as_array()

        _, c_rb = rigid_body_terms(params, nu)
        coriolis = c_rb
        if medium == "water" or self.options.added_mass_in_air:
            _, c_a = added_mass_terms(self.added, nu)
            coriolis = c_rb + c_a

        nu_dot = np.linalg.solve(self._mass[medium], tau - coriolis @ nu)
        eta_dot = euler_kinematics(phi, theta, p, q, r)
        position_dot = body_to_ned(phi, theta, psi) @ x[:3]
        return np.concatenate([nu_dot, eta_dot, position_dot])


def six_dof_derivative(
    state: Union[np.ndarray, BodyState6DOF],
    controls: Sequence[float],
    params: VehicleParams,
    added: AddedMassSet,
    env: EnvironmentModel,
    medium: Optional[Medium] = None,
    provider: Optional[CoefficientProvider] = None,
    options: Optional[SixDofOptions] = None,
) -> np.ndarray:
    """One-shot evaluation of the 6-DOF derivative; build a SixDofModel for repeated calls."""
    return SixDofModel(params, added, env, provider, options).derivative(state, controls, medium)
