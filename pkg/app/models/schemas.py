"""Pydantic models for scenario, sweep and report schemas."""

import math
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from engines.environment import EnvironmentModel
from engines.optimization import ControlBounds, FreeParameter, SolverConfig
from engines.simulation.trajectory import HoldMode
from engines.vehicle import AnalyticCoefficients, VehicleParams

Phase = Literal["launch", "boost", "combined"]
LaunchMode = Literal["horizontal", "vertical"]
SweepParameter = Literal["theta_exit", "z0", "tf", "uf", "altitude_f"]

State = Tuple[float, float, float, float, float]
Terminal = Tuple[Optional[float], Optional[float], Optional[float], Optional[float], Optional[float]]


class ScenarioSpec(BaseModel):
    """Fully validated scenario; angles in radians, z positive down."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1)
    phase: Phase = "launch"
    launch_mode: LaunchMode = "horizontal"
    initial: State
    terminal: Terminal
    t_f: float = Field(..., gt=0)
    dt: float = Field(0.2, gt=0)
    t_max: Optional[float] = Field(None, gt=0, description="Simulation horizon for surface search")
    bounds: ControlBounds = ControlBounds()
    free_parameters: List[FreeParameter] = []
    vehicle: VehicleParams = VehicleParams()
    environment: EnvironmentModel = EnvironmentModel()
    added_mass_reference: Literal["cb", "cg"] = "cb"
    axial_added_mass_coefficient: Optional[float] = None
    coefficient_table: Optional[str] = None
    coefficients: AnalyticCoefficients = AnalyticCoefficients()
    solver: SolverConfig = SolverConfig()
    substeps: int = Field(4, ge=1)
    integrator_step: float = Field(0.02, gt=0)
    hold: HoldMode = "linear"
    weights: Tuple[float, float] = (1.0, 0.0)
    boost_terminal: Optional[Terminal] = None
    boost_t_f: Optional[float] = Field(None, gt=0)

    @field_validator("initial")
    @classmethod
    def _finite_initial(cls, value: State) -> State:
        if not all(math.isfinite(v) for v in value):
            raise ValueError("initial state must be finite")
        return value

    @model_validator(mode="after")
    def _check(self) -> "ScenarioSpec":
        ratio = self.t_f / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError("t_f must be a multiple of dt")
        if self.boost_t_f is not None:
            ratio = self.boost_t_f / self.dt
            if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
                raise ValueError("boost t_f must be a multiple of dt")
        if all(v is None for v in self.terminal) and not any(
            f.target == "terminal" for f in self.free_parameters
        ):
            raise ValueError("at least one terminal component must be fixed")
        if self.phase == "combined" and (self.boost_terminal is None or self.boost_t_f is None):
            raise ValueError("combined scenarios need a [boost] section with t_f and terminal values")
        return self

    @property
    def launch_terminal_pitch(self) -> Optional[float]:
        return self.terminal[3]


class SweepSpec(BaseModel):
    """One solve per value of ``parameter`` applied to ``base``."""

    model_config = ConfigDict(frozen=True)

    base_path: str
    base: ScenarioSpec
    parameter: SweepParameter
    values: List[float] = Field(..., min_length=1)
    paired_tf: Optional[List[float]] = None
    out: Optional[str] = None

    @field_validator("values")
    @classmethod
    def _finite_values(cls, values: List[float]) -> List[float]:
        if not all(math.isfinite(v) for v in values):
            raise ValueError("sweep values must be finite")
        return values

    @model_validator(mode="after")
    def _paired(self) -> "SweepSpec":
        if self.paired_tf is not None and len(self.paired_tf) != len(self.values):
            raise ValueError("paired_tf must have one entry per sweep value")
        return self


class SweepRow(BaseModel):
    value: float
    cost: Optional[float] = None
    status: str
    iterations: int = 0
    max_residual: Optional[float] = None
    free_parameters: Dict[str, float] = {}
    baseline_cost: Optional[float] = None
    diagnostics: List[str] = []
    error: Optional[str] = None


class CombinedCostRow(BaseModel):
    angle_deg: float
    launch_cost: float
    boost_cost: float
    total: float
    launch_mode: LaunchMode = "horizontal"
    minimum: bool = False


class CombinedCostReport(BaseModel):
    rows: List[CombinedCostRow]
    best_angle_deg: float
    vertical_row: Optional[CombinedCostRow] = None
