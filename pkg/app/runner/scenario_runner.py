"""Turns a ScenarioSpec into models, transcribed problems, solves and simulations."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from app.models.schemas import ScenarioSpec
from engines.errors import ParameterError
from engines.optimization import (
    BoundarySpec,
    OptimizationResult,
    TranscribedProblem,
    constant_thrust_baseline,
    solve,
    solve_with_free_parameters,
    transcribe,
)
from engines.phases import STATE_NAMES, BoostPhaseModel, LaunchPhaseModel, PhaseModel
from engines.simulation import (
    ControlProgram,
    IntegratorConfig,
    PitchAutopilot,
    Trajectory,
    closed_loop_boost,
    integrate,
    simulate_to_surface,
)
from engines.vehicle import AddedMassSet, BodyState6DOF, CoefficientProvider, SixDofModel, derive_added_mass
from engines.vehicle.params import STATE_6DOF_NAMES

logger = logging.getLogger(__name__)

# boost leg starts at the launch terminal speed when that is fixed
DEFAULT_EXIT_SPEED = 35.0
# launch runs keep integrating this long past t_f looking for the surface
SURFACE_MARGIN = 2.0
# a converged optimum may cost at most this multiple of a feasible constant-thrust program
DOMINANCE_MARGIN = 1.01
DOMINANCE_VIOLATED = "dominance_violated"


@dataclass
class ScenarioContext:
    """Models shared by every solve and simulation of one scenario."""

    spec: ScenarioSpec
    provider: CoefficientProvider
    added: AddedMassSet

    @classmethod
    def build(cls, spec: ScenarioSpec) -> "ScenarioContext":
        if spec.coefficient_table:
            provider = CoefficientProvider.from_file(spec.coefficient_table)
        else:
            provider = CoefficientProvider.analytic(spec.coefficients)
        added = derive_added_mass(
            spec.vehicle,
            spec.environment.water_density,
            moment_reference=spec.added_mass_reference,
            axial_coefficient=spec.axial_added_mass_coefficient,
        )
        logger.info(f"ScenarioContext initialized for '{spec.name}' ({provider.mode} coefficients)")
        return cls(spec=spec, provider=provider, added=added)

    def phase_model(self, phase: str) -> PhaseModel:
        if phase == "launch":
            return LaunchPhaseModel(self.spec.vehicle, self.added, self.spec.environment, self.provider)
        if phase == "boost":
            return BoostPhaseModel(self.spec.vehicle, self.spec.environment, self.provider)
        raise ParameterError(f"no phase model for '{phase}'")

    def six_dof_model(self) -> SixDofModel:
        return SixDofModel(self.spec.vehicle, self.added, self.spec.environment, self.provider)


def boost_leg(spec: ScenarioSpec) -> Tuple[Tuple[float, ...], Tuple[Optional[float], ...], float]:
    """(initial, terminal, t_f) of the boost half of a combined scenario."""
    speed = spec.terminal[0] if spec.terminal[0] is not None else DEFAULT_EXIT_SPEED
    pitch = spec.launch_terminal_pitch
    if pitch is None:
        raise ParameterError("combined scenarios need a fixed launch terminal pitch")
    return (speed, 0.0, 0.0, pitch, 0.0), spec.boost_terminal, spec.boost_t_f


def build_problem(spec: ScenarioSpec, phase: Optional[str] = None,
                  context: Optional[ScenarioContext] = None) -> TranscribedProblem:
    """Transcribe one phase of the scenario; ``phase`` selects a leg of a combined scenario."""
    context = context or ScenarioContext.build(spec)
    phase = phase or spec.phase
    if phase == "combined":
        raise ParameterError("combined scenarios are solved leg by leg; pass phase='launch' or 'boost'")
    if spec.phase == "combined" and phase == "boost":
        initial, terminal, t_f = boost_leg(spec)
        free = [f for f in spec.free_parameters if f.target == "terminal"]
        name = f"{spec.name}/boost"
    else:
        initial, terminal, t_f = spec.initial, spec.terminal, spec.t_f
        free = spec.free_parameters if spec.phase != "combined" else [
            f for f in spec.free_parameters if f.target == "initial"
        ]
        name = spec.name if spec.phase != "combined" else f"{spec.name}/launch"
    return transcribe(
        phase,
        context.phase_model(phase),
        BoundarySpec(initial=initial, terminal=terminal),
        t_f,
        dt=spec.dt,
        bounds=spec.bounds,
        free_parameters=free,
        weights=spec.weights,
        substeps=spec.substeps,
        name=name,
    )


def solve_problem(problem: TranscribedProblem, spec: ScenarioSpec) -> OptimizationResult:
    """Solve, attach the cost of a feasible constant-thrust baseline and flag a dominance violation."""
    if problem.free_parameters:
        result = solve_with_free_parameters(problem, spec.solver)
    else:
        result = solve(problem, spec.solver)
    if not problem.constrained_indices:
        return result
    baseline = constant_thrust_baseline(problem, constraint_tol=spec.solver.constraint_tol)
    if baseline is not None and baseline.feasible:
        update = {"baseline_cost": baseline.cost}
        if result.converged and result.cost > baseline.cost * DOMINANCE_MARGIN:
            logger.warning(
                f"{problem.name}: optimal J={result.cost:.6g} exceeds constant-thrust J={baseline.cost:.6g}"
            )
            update["diagnostics"] = result.diagnostics + [DOMINANCE_VIOLATED]
        result = result.model_copy(update=update)
    return result


@dataclass
class CombinedResult:
    launch: OptimizationResult
    boost: OptimizationResult

    @property
    def total_cost(self) -> float:
        return self.launch.cost + self.boost.cost

    @property
    def status(self) -> str:
        if self.launch.converged and self.boost.converged:
            return "converged"
        return self.boost.status if self.launch.converged else self.launch.status

    @property
    def thrust(self) -> List[float]:
        """Launch then boost thrust history; the shared water-exit sample appears once."""
        return self.launch.thrust + self.boost.thrust[1:]


def optimize_scenario(spec: ScenarioSpec) -> OptimizationResult:
    """Minimum-effort solve of a launch or boost scenario."""
    if spec.phase == "combined":
        raise ParameterError("use optimize_combined for combined scenarios")
    context = ScenarioContext.build(spec)
    return solve_problem(build_problem(spec, context=context), spec)


def optimize_combined(spec: ScenarioSpec) -> CombinedResult:
    """Solve the launch leg, then the boost leg starting at its water-exit pitch."""
    context = ScenarioContext.build(spec)
    launch = solve_problem(build_problem(spec, "launch", context), spec)
    boost = solve_problem(build_problem(spec, "boost", context), spec)
    combined = CombinedResult(launch=launch, boost=boost)
    logger.info(
        f"Combined '{spec.name}': J_launch={launch.cost:.6g}, J_boost={boost.cost:.6g}, "
        f"total={combined.total_cost:.6g}"
    )
    return combined


def read_program(path: Union[str, Path], dt: float) -> ControlProgram:
    """Load a control program written by ``write_program_csv``."""
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = {"t", "T"} - set(frame.columns)
    if missing:
        raise ParameterError(f"program file {path} lacks columns {sorted(missing)}")
    if len(frame) > 1 and not np.allclose(np.diff(frame["t"].to_numpy()), dt, atol=1e-9):
        raise ParameterError(f"program file {path} is not sampled every {dt} s")
    rows = [frame["T"].to_numpy()]
    if "theta_T_deg" in frame.columns:
        rows.append(np.radians(frame["theta_T_deg"].to_numpy()))
    return ControlProgram(dt=dt, samples=np.vstack(rows))


@dataclass
class SimulationReport:
    trajectory: Trajectory
    six_dof: Optional[Trajectory] = None
    differences: Dict[str, float] = field(default_factory=dict)
    closed_loop: Optional[Trajectory] = None
    water_exit: Dict[str, float] = field(default_factory=dict)


def water_exit_report(trajectory: Trajectory) -> Dict[str, float]:
    """Velocity, pitch and angle of attack where the launch trajectory meets the surface."""
    crossing = trajectory.event_time("surface_crossing")
    if crossing is None:
        return {}
    u, w, theta = (trajectory.component(name)[-1] for name in ("u", "w", "theta"))
    return {
        "time": float(crossing),
        "u": float(u),
        "theta_deg": float(np.degrees(theta)),
        "alpha_deg": float(np.degrees(np.arctan2(w, u))),
    }


def _six_dof_comparison(context: ScenarioContext, x0: np.ndarray, program: ControlProgram, t_f: float,
                        config: IntegratorConfig, simplified: Trajectory) -> Tuple[Trajectory, Dict[str, float]]:
    model = context.six_dof_model()
    controls = ("T", "theta_T")[: program.n_controls]
    start = BodyState6DOF.from_longitudinal(*x0).as_array()
    full = integrate(model.derivative, start, program, t_f, config,
                     state_names=STATE_6DOF_NAMES, control_names=controls)
    final = full.final_state
    reference = {name: simplified.component(name)[-1] for name in ("u", "theta", "z")}
    six_dof = {"u": final[0], "theta": final[7], "z": final[11]}
    differences = {
        "u_relative": abs(six_dof["u"] - reference["u"]) / max(abs(reference["u"]), 1e-9),
        "theta_deg": float(np.degrees(abs(six_dof["theta"] - reference["theta"]))),
        "z_abs": abs(six_dof["z"] - reference["z"]),
    }
    logger.info(f"Simplified vs 6-DOF at t={t_f:.2f} s: {differences}")
    return full, {k: float(v) for k, v in differences.items()}


def simulate_scenario(
    spec: ScenarioSpec,
    program: Optional[ControlProgram] = None,
    six_dof: bool = False,
    closed_loop: bool = False,
) -> SimulationReport:
    """Propagate a control program through the phase model (solving for one if none is given).

    Launch runs stop at the surface; boost runs go to t_f. Optional extras are the
    full 6-DOF propagation of the same program and, for boost, the autopilot loop
    tracking the simplified pitch history.
    """
    if spec.phase == "combined":
        raise ParameterError("simulate a combined scenario one leg at a time")
    context = ScenarioContext.build(spec)
    model = context.phase_model(spec.phase)
    if program is None:
        result = solve_problem(build_problem(spec, context=context), spec)
        program = result.program()
        free = result.free_parameters
    else:
        free = {}
    if program.n_controls != model.n_controls:
        raise ParameterError(f"program has {program.n_controls} channels, {spec.phase} needs {model.n_controls}")

    x0 = np.array(spec.initial, dtype=float)
    if "z0" in free:
        x0[4] = free["z0"]
    config = IntegratorConfig(step=spec.integrator_step, hold=spec.hold)
    controls = ("T", "theta_T")[: model.n_controls]

    if spec.phase == "launch":
        t_max = spec.t_max or spec.t_f + SURFACE_MARGIN
        trajectory = simulate_to_surface(model.derivative, x0, program, t_max, config,
                                         state_names=STATE_NAMES, control_names=controls)
    else:
        trajectory = integrate(model.derivative, x0, program, spec.t_f, config,
                               state_names=STATE_NAMES, control_names=controls)
    report = SimulationReport(trajectory=trajectory)
    if spec.phase == "launch":
        report.water_exit = water_exit_report(trajectory)

    if six_dof:
        simplified = trajectory if spec.phase == "boost" else integrate(
            model.derivative, x0, program, spec.t_f, config, state_names=STATE_NAMES, control_names=controls
        )
        report.six_dof, report.differences = _six_dof_comparison(context, x0, program, spec.t_f, config, simplified)
    if closed_loop:
        if spec.phase != "boost":
            raise ParameterError("closed-loop verification applies to boost scenarios")
        autopilot = PitchAutopilot.synthesize(model, theta0=x0[3], thrust_max=spec.bounds.thrust_max,
                                              max_deflection=spec.bounds.deflection_max)
        theta = np.interp(program.times, trajectory.times, trajectory.component("theta"))
        reference = ControlProgram(dt=program.dt, samples=theta[None, :])
        thrust = ControlProgram(dt=program.dt, samples=program.samples[:1])
        report.closed_loop = closed_loop_boost(x0, thrust, reference, autopilot, spec.t_f, model, config)
    return report
