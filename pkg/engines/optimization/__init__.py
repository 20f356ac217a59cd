"""Minimum-effort transcription, solver and constant-thrust baseline."""

from .baseline import BaselineResult, constant_thrust_baseline
from .cost import effort_cost, effort_gradient
from .problem import (
    BoundarySpec,
    ControlBounds,
    FreeParameter,
    TranscribedProblem,
    terminal_residuals,
    transcribe,
)
from .solver import OptimizationResult, SolverConfig, initial_guess, solve, solve_with_free_parameters

__all__ = [
    "BaselineResult",
    "BoundarySpec",
    "ControlBounds",
    "FreeParameter",
    "OptimizationResult",
    "SolverConfig",
    "TranscribedProblem",
    "constant_thrust_baseline",
    "effort_cost",
    "effort_gradient",
    "initial_guess",
    "solve",
    "solve_with_free_parameters",
    "terminal_residuals",
    "transcribe",
]
