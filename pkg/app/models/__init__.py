"""Pydantic models for scenario, sweep and report validation."""

from .schemas import CombinedCostReport, CombinedCostRow, ScenarioSpec, SweepRow, SweepSpec

__all__ = ["CombinedCostReport", "CombinedCostRow", "ScenarioSpec", "SweepRow", "SweepSpec"]
