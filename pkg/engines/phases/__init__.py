"""Simplified longitudinal launch and boost phase models."""

from .boost import BoostPhaseModel, boost_derivative
from .launch import LaunchPhaseModel, launch_derivative
from .state import STATE_NAMES, BoostControl, LaunchControl, LongitudinalState, PhaseModel

__all__ = [
    "BoostControl",
    "BoostPhaseModel",
    "LaunchControl",
    "LaunchPhaseModel",
    "LongitudinalState",
    "PhaseModel",
    "STATE_NAMES",
    "boost_derivative",
    "launch_derivative",
]
