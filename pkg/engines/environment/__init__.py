"""Medium properties and flow scalars."""

from .atmosphere import EnvironmentModel, Medium, dynamic_pressure, medium_at, total_speed

__all__ = ["EnvironmentModel", "Medium", "dynamic_pressure", "medium_at", "total_speed"]
