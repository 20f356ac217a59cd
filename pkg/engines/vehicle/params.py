"""Physical parameter types of the vehicle and its force/state containers."""

from dataclasses import dataclass, fields
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from engines.environment import EnvironmentModel

Scalar = Union[float, np.ndarray]


class VehicleParams(BaseModel):
    """Mass, inertia and geometry of the conceptual vehicle.

    Positions are given in the measurement frame, whose origin is the nose tip
    and whose x axis points aft. Defaults reproduce the conceptual design table.
    """

    model_config = ConfigDict(frozen=True)

    mass: float = Field(1513.0, gt=0)
    inertia: Tuple[float, float, float] = (50.6684, 4841.6944, 4841.6944)
    length: float = Field(6.1806, gt=0)
    diameter: float = Field(0.5175, gt=0)
    reference_area: float = Field(0.2104, gt=0)
    volume: float = Field(1.332, gt=0)
    cg_position: Tuple[float, float, float] = (3.1903, 0.0, 0.0)
    cb_position: Tuple[float, float, float] = (3.0903, 0.0, 0.0)
    nose_length: float = Field(0.47, gt=0, description="Length of the ellipsoidal nose section (m)")
    thrust_arm: Optional[float] = Field(
        None, description="Body-x coordinate of the nozzle relative to the cg; defaults to the tail"
    )

    @model_validator(mode="after")
    def _check_geometry(self) -> "VehicleParams":
        if any(i <= 0 for i in self.inertia):
            raise ValueError(f"inertia components must be positive, got {self.inertia}")
        if self.x_b <= 0:
            raise ValueError(
                f"center of buoyancy must lie ahead of the cg (x_cg - x_cb > 0), got {self.x_b:.4f} m"
            )
        if self.nose_length >= self.length:
            raise ValueError("nose_length must be shorter than the vehicle")
        return self

    @property
    def i_x(self) -> float:
        return self.inertia[0]

    @property
    def i_y(self) -> float:
        return self.inertia[1]

    @property
    def i_z(self) -> float:
        return self.inertia[2]

    @property
    def x_b(self) -> float:
        """Distance from the center of buoyancy to the cg along the body axis."""
        return self.cg_position[0] - self.cb_position[0]

    @property
    def l_x(self) -> float:
        if self.thrust_arm is not None:
            return self.thrust_arm
        return -(self.length - self.cg_position[0])

    def weight(self, env: EnvironmentModel) -> float:
        return self.mass * env.gravity

    def buoyancy(self, env: EnvironmentModel) -> float:
        return env.water_density * env.gravity * self.volume


class AddedMassSet(BaseModel):
    """Hydrodynamic added-mass derivatives of a finless body of revolution."""

    model_config = ConfigDict(frozen=True)

    x_udot: float = 0.0
    y_vdot: float = 0.0
    y_rdot: float = 0.0
    z_wdot: float = 0.0
    z_qdot: float = 0.0
    k_pdot: float = 0.0
    m_wdot: float = 0.0
    m_qdot: float = 0.0
    n_vdot: float = 0.0
    n_rdot: float = 0.0

    @classmethod
    def zero(cls) -> "AddedMassSet":
        return cls()

    def mass_matrix(self) -> np.ndarray:
        """M_A, the negated derivative pattern."""
        m_a = np.zeros((6, 6))
        m_a[0, 0] = self.x_udot
        m_a[1, 1] = self.y_vdot
        m_a[1, 5] = self.y_rdot
        m_a[2, 2] = self.z_wdot
        m_a[2, 4] = self.z_qdot
        m_a[3, 3] = self.k_pdot
        m_a[4, 2] = self.m_wdot
        m_a[4, 4] = self.m_qdot
        m_a[5, 1] = self.n_vdot
        m_a[5, 5] = self.n_rdot
        return -m_a


@dataclass(frozen=True)
class ForceMoment:
    """Body-frame forces (N) and moments (N m); components may be arrays."""

    X: Scalar = 0.0
    Y: Scalar = 0.0
    Z: Scalar = 0.0
    L: Scalar = 0.0
    M: Scalar = 0.0
    N: Scalar = 0.0

    def __add__(self, other: "ForceMoment") -> "ForceMoment":
        return ForceMoment(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    @classmethod
    def zero(cls) -> "ForceMoment":
        return cls()


STATE_6DOF_NAMES = ("u", "v", "w", "p", "q", "r", "phi", "theta", "psi", "north", "east", "z")


@dataclass(frozen=True)
class BodyState6DOF:
    """Body velocities, Euler attitude and NED position (z positive down)."""

    u: float = 0.0
    v: float = 0.0
    w: float = 0.0
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0
    north: float = 0.0
    east: float = 0.0
    z: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in STATE_6DOF_NAMES], dtype=float)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "BodyState6DOF":
        values = np.asarray(values, dtype=float)
        return cls(*(float(v) for v in values[:12]))

    @classmethod
    def from_longitudinal(cls, u: float, w: float, q: float, theta: float, z: float) -> "BodyState6DOF":
        return cls(u=u, w=w, q=q, theta=theta, z=z)

    def longitudinal(self) -> np.ndarray:
        return np.array([self.u, self.w, self.q, self.theta, self.z])
