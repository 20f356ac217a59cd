"""Direct single-shooting transcription of the launch and boost minimum-effort problems."""

import logging
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from engines.errors import HydroboostError, ParameterError
from engines.phases import STATE_NAMES, PhaseModel
from engines.simulation import intervals, rk4_step
from .cost import effort_cost, effort_gradient

logger = logging.getLogger(__name__)

# residual assigned to every fixed component when a propagation fails
FAILURE_RESIDUAL = 1e6

RESIDUAL_SCALES = {"u": 10.0, "w": 10.0, "q": 0.1, "theta": 0.1, "z": 10.0}


class ControlBounds(BaseModel):
    """Thrust box (N) and symmetric deflection box (rad)."""

    model_config = ConfigDict(frozen=True)

    thrust_min: float = Field(0.0, ge=0)
    thrust_max: float = Field(30000.0, ge=0)
    deflection_max: float = Field(np.radians(12.0), ge=0)

    @model_validator(mode="after")
    def _ordered(self) -> "ControlBounds":
        if self.thrust_max < self.thrust_min:
            raise ValueError(f"thrust bounds out of order: [{self.thrust_min}, {self.thrust_max}]")
        return self

    def boxes(self, n_controls: int) -> List[Tuple[float, float]]:
        boxes = [(self.thrust_min, self.thrust_max), (-self.deflection_max, self.deflection_max)]
        return boxes[:n_controls]


class BoundarySpec(BaseModel):
    """Fixed initial state; terminal components fixed to a value or left free (None)."""

    model_config = ConfigDict(frozen=True)

    initial: Tuple[float, ...]
    terminal: Tuple[Optional[float], ...]

    @model_validator(mode="after")
    def _consistent(self) -> "BoundarySpec":
        if len(self.initial) != len(self.terminal):
            raise ValueError("initial and terminal specs must have the same length")
        values = list(self.initial) + [v for v in self.terminal if v is not None]
        if not np.all(np.isfinite(values)):
            raise ValueError("boundary values must be finite")
        return self

    @property
    def fixed_indices(self) -> List[int]:
        return [i for i, v in enumerate(self.terminal) if v is not None]


class FreeParameter(BaseModel):
    """A boundary value searched by the optimizer inside [lower, upper].

    The state component receives ``sign * value``, so a free altitude uses sign -1
    on the down-positive z component.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    target: Literal["initial", "terminal"]
    index: int = Field(..., ge=0)
    lower: float
    upper: float
    scale: float = Field(100.0, gt=0)
    sign: Literal[1, -1] = 1

    @field_validator("lower", "upper")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("free-parameter boxes must be finite")
        return value

    @model_validator(mode="after")
    def _ordered(self) -> "FreeParameter":
        if self.upper < self.lower:
            raise ValueError(f"free parameter '{self.name}' box out of order: [{self.lower}, {self.upper}]")
        return self

    @classmethod
    def initial_depth(cls, lower: float, upper: float) -> "FreeParameter":
        return cls(name="z0", target="initial", index=4, lower=lower, upper=upper, scale=100.0)

    @classmethod
    def final_velocity(cls, lower: float, upper: float) -> "FreeParameter":
        return cls(name="uf", target="terminal", index=0, lower=lower, upper=upper, scale=100.0)

    @classmethod
    def final_altitude(cls, lower: float, upper: float) -> "FreeParameter":
        return cls(name="altitude_f", target="terminal", index=4, lower=lower, upper=upper, scale=100.0, sign=-1)


@dataclass
class TranscribedProblem:
    """Decision vector z = [channel 0 samples, channel 1 samples, ..., free scalars] in physical units."""

    phase: str
    model: PhaseModel
    boundary: BoundarySpec
    dt: float
    n_intervals: int
    control_boxes: Sequence[Tuple[float, float]]
    free_parameters: Sequence[FreeParameter] = ()
    weights: Sequence[float] = (1.0, 0.0)
    substeps: int = 4
    state_names: Sequence[str] = STATE_NAMES
    residual_scales: Optional[Sequence[float]] = None
    name: str = ""
    evaluations: int = field(default=0, init=False)
    failed_evaluations: int = field(default=0, init=False)

    def __post_init__(self):
        if self.n_intervals < 2:
            raise ParameterError(f"transcription needs N >= 2 intervals, got {self.n_intervals}")
        if self.substeps < 1:
            raise ParameterError("substeps must be at least 1")
        if len(self.control_boxes) != self.model.n_controls:
            raise ParameterError(
                f"{len(self.control_boxes)} control boxes for a model with {self.model.n_controls} controls"
            )
        for lo, hi in self.control_boxes:
            if hi < lo:
                raise ParameterError(f"control box out of order: [{lo}, {hi}]")
        n_states = len(self.boundary.initial)
        for free in self.free_parameters:
            if free.index >= n_states:
                raise ParameterError(f"free parameter '{free.name}' targets component {free.index} of {n_states}")
        if self.residual_scales is None:
            self.residual_scales = [RESIDUAL_SCALES.get(n, 1.0) for n in self.state_names]

    @property
    def n_controls(self) -> int:
        return self.model.n_controls

    @property
    def n_samples(self) -> int:
        return self.n_intervals + 1

    @property
    def n_decision(self) -> int:
        return self.n_controls * self.n_samples + len(self.free_parameters)

    @property
    def t_final(self) -> float:
        return self.n_intervals * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    @property
    def constrained_indices(self) -> List[int]:
        fixed = set(self.boundary.fixed_indices)
        fixed.update(f.index for f in self.free_parameters if f.target == "terminal")
        return sorted(fixed)

    @property
    def residual_names(self) -> List[str]:
        return [self.state_names[i] for i in self.constrained_indices]

    def lower(self) -> np.ndarray:
        controls = np.repeat([lo for lo, _ in self.control_boxes], self.n_samples)
        return np.concatenate([controls, [f.lower for f in self.free_parameters]])

    def upper(self) -> np.ndarray:
        controls = np.repeat([hi for _, hi in self.control_boxes], self.n_samples)
        return np.concatenate([controls, [f.upper for f in self.free_parameters]])

    def scales(self) -> np.ndarray:
        channel = [max(abs(lo), abs(hi)) or 1.0 for lo, hi in self.control_boxes]
        return np.concatenate([np.repeat(channel, self.n_samples), [f.scale for f in self.free_parameters]])

    def project(self, z: np.ndarray) -> np.ndarray:
        lo, hi = self.lower(), self.upper()
        if z.ndim == 2:
            return np.clip(z, lo[:, None], hi[:, None])
        return np.clip(z, lo, hi)

    def unpack(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(samples (n_controls, N+1, ...), free values (n_free, ...)) for z of shape (n,) or (n, m)."""
        n_ctrl = self.n_controls * self.n_samples
        samples = z[:n_ctrl].reshape((self.n_controls, self.n_samples) + z.shape[1:])
        return samples, z[n_ctrl:]

    def pack(self, samples: np.ndarray, free_values: Sequence[float] = ()) -> np.ndarray:
        return np.concatenate([np.asarray(samples, dtype=float).ravel(), np.asarray(free_values, dtype=float)])

    def initial_states(self, free_values: np.ndarray, m: int) -> np.ndarray:
        x0 = np.repeat(np.asarray(self.boundary.initial, dtype=float)[:, None], m, axis=1)
        for k, free in enumerate(self.free_parameters):
            if free.target == "initial":
                x0[free.index] = free.sign * free_values[k]
        return x0

    def targets(self, free_values: np.ndarray, m: int) -> np.ndarray:
        """Terminal targets of the constrained components, shape (n_residuals, m)."""
        terminal = {i: self.boundary.terminal[i] for i in self.boundary.fixed_indices}
        rows = {i: np.full(m, float(v)) for i, v in terminal.items()}
        for k, free in enumerate(self.free_parameters):
            if free.target == "terminal":
                rows[free.index] = free.sign * np.broadcast_to(free_values[k], (m,)).astype(float)
        return np.array([rows[i] for i in self.constrained_indices]).reshape(-1, m)

    def effort(self, z: np.ndarray) -> float:
        samples, _ = self.unpack(z)
        return effort_cost(samples, self.dt, self.weights)

    def effort_gradient(self, z: np.ndarray) -> np.ndarray:
        samples, free = self.unpack(z)
        return np.concatenate([effort_gradient(samples, self.dt, self.weights).ravel(), np.zeros(len(free))])

    def _propagate(self, x: np.ndarray, samples: np.ndarray) -> np.ndarray:
        h = self.dt / self.substeps
        f = self.model.derivative
        for k in range(self.n_intervals):
            left, right = samples[:, k], samples[:, k + 1]
            for s in range(self.substeps):
                a0, a1 = s / self.substeps, (s + 1) / self.substeps
                u0 = (1.0 - a0) * left + a0 * right
                u1 = (1.0 - a1) * left + a1 * right
                x = rk4_step(f, x, u0, 0.5 * (u0 + u1), u1, h)
        return x

    def propagate(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Terminal states (n_states, m) for decision columns z (n, m), plus a per-column failure mask.

        All columns are advanced together; if that fails the columns are retried one by one.
        """
        z = self.project(z)
        m = z.shape[1]
        samples, free = self.unpack(z)
        x0 = self.initial_states(free, m)
        self.evaluations += m
        try:
            with np.errstate(over="raise", invalid="raise", divide="raise"):
                xf = self._propagate(x0, samples)
            failed = ~np.all(np.isfinite(xf), axis=0)
            if not failed.any():
                return xf, failed
        except (HydroboostError, FloatingPointError, np.linalg.LinAlgError):
            pass

        xf = np.full((x0.shape[0], m), np.nan)
        failed = np.zeros(m, dtype=bool)
        for j in range(m):
            try:
                with np.errstate(over="raise", invalid="raise", divide="raise"):
                    xf[:, j] = self._propagate(x0[:, j:j + 1], samples[:, :, j:j + 1])[:, 0]
                failed[j] = not np.all(np.isfinite(xf[:, j]))
            except (HydroboostError, FloatingPointError, np.linalg.LinAlgError) as e:
                failed[j] = True
                logger.debug(f"Propagation failed for column {j}: {e}")
        self.failed_evaluations += int(failed.sum())
        return xf, failed

    def residual_matrix(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Physical residuals (n_residuals, m) and the failure mask for decision columns z (n, m)."""
        xf, failed = self.propagate(z)
        _, free = self.unpack(self.project(z))
        residuals = xf[self.constrained_indices] - self.targets(free, z.shape[1])
        residuals[:, failed] = FAILURE_RESIDUAL
        return residuals, failed

    def normalized(self, residuals: np.ndarray) -> np.ndarray:
        scales = np.asarray(self.residual_scales, dtype=float)[self.constrained_indices]
        return residuals / scales.reshape((-1,) + (1,) * (residuals.ndim - 1))

    def terminal_state(self, z: np.ndarray) -> np.ndarray:
        xf, failed = self.propagate(np.asarray(z, dtype=float)[:, None])
        if failed[0]:
            return np.full(len(self.boundary.initial), np.nan)
        return xf[:, 0]


def terminal_residuals(z: np.ndarray, problem: TranscribedProblem) -> np.ndarray:
    """Propagated terminal components minus their targets, one entry per constrained component."""
    residuals, failed = problem.residual_matrix(np.asarray(z, dtype=float)[:, None])
    if failed[0]:
        logger.warning(f"Propagation failed for {problem.name or problem.phase}; residuals penalized")
    return residuals[:, 0]


def transcribe(
    phase: str,
    model: PhaseModel,
    boundary: BoundarySpec,
    t_final: float,
    dt: float = 0.2,
    bounds: Optional[ControlBounds] = None,
    free_parameters: Sequence[FreeParameter] = (),
    weights: Sequence[float] = (1.0, 0.0),
    substeps: int = 4,
    name: str = "",
) -> TranscribedProblem:
    bounds = bounds or ControlBounds()
    return TranscribedProblem(
        phase=phase,
        model=model,
        boundary=boundary,
        dt=dt,
        n_intervals=intervals(t_final, dt),
        control_boxes=bounds.boxes(model.n_controls),
        free_parameters=tuple(free_parameters),
        weights=tuple(weights),
        substeps=substeps,
        name=name,
    )

