"""Scenario orchestration: solves, simulations, sweeps, combined costs and oracle checks."""

from .combined import combined_cost, costs_from_sweep
from .oracles import added_mass_comparison, verify
from .scenario_runner import (
    CombinedResult,
    ScenarioContext,
    SimulationReport,
    build_problem,
    optimize_combined,
    optimize_scenario,
    read_program,
    simulate_scenario,
)
from .sweep import apply_sweep_value, run_sweep

__all__ = [
    "CombinedResult",
    "ScenarioContext",
    "SimulationReport",
    "added_mass_comparison",
    "apply_sweep_value",
    "build_problem",
    "combined_cost",
    "costs_from_sweep",
    "optimize_combined",
    "optimize_scenario",
    "read_program",
    "run_sweep",
    "simulate_scenario",
    "verify",
]
