"""Trajectory propagation, surface events and closed-loop boost verification."""

from .autopilot import PitchAutopilot, closed_loop_boost
from .integrator import IntegratorConfig, integrate, rk4_step, simulate_to_surface
from .trajectory import TRAJECTORY_COLUMNS, ControlProgram, Event, Trajectory, intervals

__all__ = [
    "ControlProgram",
    "Event",
    "IntegratorConfig",
    "PitchAutopilot",
    "TRAJECTORY_COLUMNS",
    "Trajectory",
    "closed_loop_boost",
    "integrate",
    "intervals",
    "rk4_step",
    "simulate_to_surface",
]
