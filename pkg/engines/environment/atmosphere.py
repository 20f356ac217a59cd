"""Medium properties: seawater, ISA troposphere air, gravity and flow scalars."""

import logging
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from engines.errors import DomainError

logger = logging.getLogger(__name__)

Medium = Literal["water", "air"]
ArrayLike = Union[float, np.ndarray]

ISA_CEILING = 11000.0


class EnvironmentModel(BaseModel):
    """Seawater and standard-atmosphere properties used by all force models."""

    model_config = ConfigDict(frozen=True)

    water_density: float = Field(1023.0, gt=0, description="Seawater density (kg/m^3)")
    gravity: float = Field(9.81, gt=0, description="Gravitational acceleration for weight (m/s^2)")
    isa_sea_level_density: float = Field(1.225, gt=0)
    isa_sea_level_temperature: float = Field(288.15, gt=0)
    isa_lapse_rate: float = Field(0.0065, gt=0)
    isa_gravity: float = Field(9.80665, gt=0, description="Standard gravity inside the ISA formula")
    gas_constant_air: float = Field(287.053, gt=0)
    sound_speed_air: float = Field(340.0, gt=0, description="Reference sound speed for Mach in air (m/s)")

    @property
    def _isa_exponent(self) -> float:
        return self.isa_gravity / (self.gas_constant_air * self.isa_lapse_rate) - 1.0

    def air_density(self, altitude: ArrayLike) -> ArrayLike:
        """ISA troposphere density at ``altitude`` metres (0 to 11 km)."""
        h = np.asarray(altitude, dtype=float)
        if np.any(h < 0.0) or np.any(h > ISA_CEILING) or not np.all(np.isfinite(h)):
            raise DomainError(
                f"altitude {altitude!r} outside the ISA troposphere band [0, {ISA_CEILING:.0f}] m"
            )
        ratio = 1.0 - self.isa_lapse_rate * h / self.isa_sea_level_temperature
        rho = self.isa_sea_level_density * ratio ** self._isa_exponent
        return float(rho) if rho.ndim == 0 else rho

    def medium_density(self, depth_or_altitude: ArrayLike, medium: Medium) -> ArrayLike:
        """Density of the surrounding medium; altitude for air, depth (ignored) for water."""
        if medium == "water":
            if np.ndim(depth_or_altitude) == 0:
                return self.water_density
            return np.full(np.shape(depth_or_altitude), self.water_density)
        if medium == "air":
            return self.air_density(depth_or_altitude)
        raise DomainError(f"unknown medium '{medium}', expected 'water' or 'air'")

    def buoyancy(self, volume: float, medium: Medium) -> float:
        """Buoyant force on a fully immersed volume; zero in air."""
        if medium == "air":
            return 0.0
        return self.water_density * self.gravity * volume


def medium_at(z: float) -> Medium:
    """Medium switch at the free surface; z is positive down."""
    return "water" if z > 0.0 else "air"


def total_speed(u: ArrayLike, v: ArrayLike, w: ArrayLike) -> ArrayLike:
    """Magnitude of the body velocity vector."""
    return np.sqrt(np.square(u) + np.square(v) + np.square(w))


def dynamic_pressure(rho: ArrayLike, speed: ArrayLike) -> ArrayLike:
    """Q = rho V^2 / 2."""
    if np.any(np.asarray(rho) < 0.0):
        raise DomainError(f"density must be non-negative, got {rho!r}")
    return 0.5 * rho * np.square(speed)
