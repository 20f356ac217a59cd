"""Longitudinal state and control types shared by the launch and boost models."""

from typing import Protocol, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

STATE_NAMES = ("u", "w", "q", "theta", "z")


class LongitudinalState(BaseModel):
    """[u, w, q, theta, z] with z positive down (depth in water, altitude = -z in air)."""

    model_config = ConfigDict(frozen=True)

    u: float
    w: float = 0.0
    q: float = 0.0
    theta: float = 0.0
    z: float = 0.0

    @field_validator("u", "w", "q", "theta", "z")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("state components must be finite")
        return value

    @property
    def altitude(self) -> float:
        return -self.z

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.w, self.q, self.theta, self.z])

    @classmethod
    def from_array(cls, values: np.ndarray) -> "LongitudinalState":
        return cls(**{name: float(v) for name, v in zip(STATE_NAMES, values)})


class LaunchControl(BaseModel):
    model_config = ConfigDict(frozen=True)

    thrust: float = Field(..., ge=0, description="Thrust (N)")

    def as_array(self) -> np.ndarray:
        return np.array([self.thrust])


class BoostControl(BaseModel):
    model_config = ConfigDict(frozen=True)

    thrust: float = Field(..., ge=0, description="Thrust (N)")
    deflection: float = Field(0.0, description="Pitch thrust deflection theta_T (rad)")

    def as_array(self) -> np.ndarray:
        return np.array([self.thrust, self.deflection])


ControlLike = Union[LaunchControl, BoostControl, float, np.ndarray]
StateLike = Union[LongitudinalState, np.ndarray]


class PhaseModel(Protocol):
    """Vectorized longitudinal dynamics: x is (5,) or (5, n), controls (k,) or (k, n)."""

    name: str
    n_controls: int

    def derivative(self, x: StateLike, controls: ControlLike) -> np.ndarray:
        ...


def state_array(x: StateLike) -> np.ndarray:
    if isinstance(x, LongitudinalState):
        return x.as_array()
    return np.asarray(x, dtype=float)


def control_array(controls: ControlLike, n_controls: int) -> np.ndarray:
    if isinstance(controls, (LaunchControl, BoostControl)):
        values = controls.as_array()
    else:
        values = np.atleast_1d(np.asarray(controls, dtype=float))
    if values.shape[0] < n_controls:
        # missing deflection row means zero deflection
        pad = np.zeros((n_controls - values.shape[0],) + values.shape[1:])
        values = np.concatenate([values, pad], axis=0)
    return values[:n_controls]
