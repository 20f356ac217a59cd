"""Control programs on the optimizer grid and propagated trajectories."""

from dataclasses import dataclass, field
from typing import List, Literal, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from engines.errors import ParameterError

EventKind = Literal["surface_crossing", "final_time"]
HoldMode = Literal["linear", "zero_order"]

TRAJECTORY_COLUMNS = ["t", "u", "w", "q", "theta_deg", "z", "altitude", "T", "theta_T_deg", "event"]


class Event(NamedTuple):
    time: float
    kind: EventKind


@dataclass(frozen=True)
class ControlProgram:
    """Control samples at t_k = k*dt, shape (n_controls, N + 1)."""

    dt: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        object.__setattr__(self, "samples", samples)
        if self.dt <= 0:
            raise ParameterError(f"control spacing must be positive, got {self.dt}")
        if samples.shape[1] < 2:
            raise ParameterError("a control program needs at least two samples")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("control samples must be finite")

    @classmethod
    def constant(cls, values: Sequence[float], dt: float, t_final: float) -> "ControlProgram":
        n = intervals(t_final, dt)
        column = np.asarray(values, dtype=float).reshape(-1, 1)
        return cls(dt=dt, samples=np.repeat(column, n + 1, axis=1))

    @property
    def n_controls(self) -> int:
        return self.samples.shape[0]

    @property
    def n_intervals(self) -> int:
        return self.samples.shape[1] - 1

    @property
    def t_final(self) -> float:
        return self.n_intervals * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_intervals + 1) * self.dt

    def at(self, t: float, hold: HoldMode = "linear") -> np.ndarray:
        """Sample value at time t; held at the end samples outside [0, t_f]."""
        position = np.clip(t / self.dt, 0.0, self.n_intervals)
        k = min(int(np.floor(position + 1e-9)), self.n_intervals - 1)
        if hold == "zero_order":
            if position >= self.n_intervals - 1e-9:
                return self.samples[:, -1].copy()
            return self.samples[:, k].copy()
        frac = position - k
        return (1.0 - frac) * self.samples[:, k] + frac * self.samples[:, k + 1]


def intervals(t_final: float, dt: float) -> int:
    """Number of dt intervals in t_final; raises when t_final is not a multiple of dt."""
    n = int(round(t_final / dt))
    if n < 1 or abs(n * dt - t_final) > 1e-9 * max(1.0, t_final):
        raise ParameterError(f"t_f = {t_final} must be a positive multiple of dt = {dt}")
    return n


@dataclass
class Trajectory:
    """Time history of states and applied controls plus event markers."""

    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    state_names: Sequence[str]
    control_names: Sequence[str] = ("T", "theta_T")
    events: List[Event] = field(default_factory=list)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if not len(self.times):
            self.states = np.zeros((0, len(self.state_names)))
            self.controls = np.zeros((0, len(self.control_names)))
        else:
            self.states = np.asarray(self.states, dtype=float).reshape(len(self.times), -1)
            self.controls = np.asarray(self.controls, dtype=float).reshape(len(self.times), -1)
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ParameterError("trajectory times must be strictly increasing")
        if len(self.state_names) != self.states.shape[1]:
            raise ParameterError(
                f"{len(self.state_names)} state names for {self.states.shape[1]} state components"
            )
        if len(self.times):
            for event in self.events:
                if not self.times[0] - 1e-12 <= event.time <= self.times[-1] + 1e-12:
                    raise ParameterError(f"event {event.kind} at t={event.time} outside the trajectory")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def component(self, name: str) -> np.ndarray:
        return self.states[:, list(self.state_names).index(name)]

    def control(self, name: str) -> np.ndarray:
        names = list(self.control_names)
        if name not in names or self.controls.shape[1] <= names.index(name):
            return np.zeros(len(self.times))
        return self.controls[:, names.index(name)]

    def event_time(self, kind: EventKind) -> Optional[float]:
        for event in self.events:
            if event.kind == kind:
                return event.time
        return None

    def to_frame(self) -> pd.DataFrame:
        """Longitudinal view in the CSV column schema."""
        if not len(self.times):
            return pd.DataFrame(columns=TRAJECTORY_COLUMNS)
        z = self.component("z")
        marks = [""] * len(self.times)
        for event in self.events:
            index = int(np.argmin(np.abs(self.times - event.time)))
            marks[index] = event.kind if not marks[index] else f"{marks[index]};{event.kind}"
        return pd.DataFrame({
            "t": self.times,
            "u": self.component("u"),
            "w": self.component("w"),
            "q": self.component("q"),
            "theta_deg": np.degrees(self.component("theta")),
            "z": z,
            "altitude": -z,
            "T": self.control("T"),
            "theta_T_deg": np.degrees(self.control("theta_T")),
            "event": marks,
        }, columns=TRAJECTORY_COLUMNS)
