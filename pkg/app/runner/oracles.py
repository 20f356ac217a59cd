"""Analytic reference problems the `verify` command checks the engines against."""

import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from engines.optimization import BoundarySpec, OptimizationResult, SolverConfig, TranscribedProblem, effort_cost, solve
from engines.phases.state import control_array
from engines.simulation import ControlProgram, IntegratorConfig, integrate
from engines.vehicle import VehicleParams, derive_added_mass

logger = logging.getLogger(__name__)

DOUBLE_INTEGRATOR_COST = 12.0
ORACLE_SOLVER = SolverConfig(constraint_tol=1e-4, gradient_tol=1e-6, max_outer=30, max_inner=2000)


class DoubleIntegratorModel:
    """x' = v, v' = a with a single acceleration channel."""

    name = "double_integrator"
    n_controls = 1

    def derivative(self, x: np.ndarray, controls) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        a = control_array(controls, self.n_controls)[0]
        return np.stack([x[1], np.broadcast_to(a, np.shape(x[1])).astype(float)])


def double_integrator_problem(
    dt: float = 0.05,
    terminal: tuple = (1.0, 0.0),
    box: float = 20.0,
    substeps: int = 1,
) -> TranscribedProblem:
    """Rest-to-rest unit move in unit time; ``terminal`` entries may be None (free)."""
    return TranscribedProblem(
        phase="double_integrator",
        model=DoubleIntegratorModel(),
        boundary=BoundarySpec(initial=(0.0, 0.0), terminal=terminal),
        dt=dt,
        n_intervals=int(round(1.0 / dt)),
        control_boxes=[(-box, box)],
        substeps=substeps,
        state_names=("x", "v"),
        residual_scales=(1.0, 1.0),
        name="double_integrator",
    )


def linear_fit_r2(times: np.ndarray, values: np.ndarray, slope: float, intercept: float) -> float:
    """Coefficient of determination of ``values`` against intercept + slope * t."""
    predicted = intercept + slope * np.asarray(times)
    residual = np.sum((np.asarray(values) - predicted) ** 2)
    total = np.sum((np.asarray(values) - np.mean(values)) ** 2)
    return float(1.0 - residual / total) if total > 0 else float(residual == 0)


def solve_double_integrator(dt: float = 0.05, config: Optional[SolverConfig] = None) -> OptimizationResult:
    return solve(double_integrator_problem(dt), config or ORACLE_SOLVER)


def rk4_order(steps: tuple = (0.1, 0.05), t_f: float = 1.0) -> float:
    """Empirical convergence order of the integrator on x' = x, x(0) = 1."""
    errors = []
    program = ControlProgram.constant([0.0], dt=max(steps), t_final=t_f)
    for step in steps:
        trajectory = integrate(lambda x, u: x, [1.0], program, t_f, IntegratorConfig(step=step))
        errors.append(abs(trajectory.final_state[0] - np.exp(t_f)))
    return float(np.log(errors[0] / errors[1]) / np.log(steps[0] / steps[1]))


def trapezoid_ramp_ratio(dt: float = 0.2, peak: float = 1000.0) -> float:
    """Quadrature error of J on T = peak * t over [0, 1] divided by its analytic bound dt^2/12 * max|f''|."""
    times = np.arange(int(round(1.0 / dt)) + 1) * dt
    error = effort_cost(peak * times[None, :], dt) - peak**2 / 3.0
    bound = dt**2 / 12.0 * 2.0 * peak**2
    return float(error / bound)


class OracleCheck(BaseModel):
    name: str
    value: float
    expected: str
    passed: bool


def verify() -> List[OracleCheck]:
    """Run every analytic oracle and report each check."""
    checks: List[OracleCheck] = []

    result = solve_double_integrator()
    times = np.asarray(result.times)
    r2 = linear_fit_r2(times, np.asarray(result.thrust), -12.0, 6.0)
    checks.append(OracleCheck(
        name="double integrator J",
        value=result.cost,
        expected="12 within 1%",
        passed=result.converged and abs(result.cost - DOUBLE_INTEGRATOR_COST) <= 0.01 * DOUBLE_INTEGRATOR_COST,
    ))
    checks.append(OracleCheck(name="double integrator control R^2 vs 6 - 12t", value=r2, expected="> 0.999",
                              passed=r2 > 0.999))

    order = rk4_order()
    checks.append(OracleCheck(name="RK4 empirical order", value=order, expected="[3.8, 4.2]",
                              passed=3.8 <= order <= 4.2))

    constant = effort_cost(np.full((1, 3), 1000.0), 0.2)
    checks.append(OracleCheck(name="trapezoid, constant 1000 N over 0.4 s", value=constant, expected="4.0e5 exact",
                              passed=abs(constant - 4.0e5) <= 1e-9))

    ratio = trapezoid_ramp_ratio()
    checks.append(OracleCheck(name="trapezoid error / analytic bound, linear ramp", value=ratio,
                              expected="[0.5, 2]", passed=0.5 <= ratio <= 2.0))

    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.warning(f"Oracle checks failed: {failed}")
    else:
        logger.info(f"All {len(checks)} oracle checks passed")
    return checks


# published added-mass set for the default vehicle in seawater
REFERENCE_ADDED_MASS = {
    "x_udot": -10.5294,
    "y_vdot": -1296.5,
    "y_rdot": -99.4382,
    "z_wdot": -1296.5,
    "z_qdot": 99.4382,
    "k_pdot": 0.0,
    "m_wdot": 99.4382,
    "m_qdot": -3936.7,
    "n_vdot": -99.4382,
    "n_rdot": -3936.7,
}
# the closed-form spheroid factor lands further from the published axial term
AXIAL_TOLERANCE = 0.35
ADDED_MASS_TOLERANCE = 0.10


class AddedMassRow(BaseModel):
    name: str
    derived: float
    reference: float
    relative_error: Optional[float]
    tolerance: float
    passed: bool


def added_mass_comparison(rho: float = 1023.0, moment_reference: str = "cb",
                          params: Optional[VehicleParams] = None) -> List[AddedMassRow]:
    """Derived added-mass terms next to the published values."""
    added = derive_added_mass(params or VehicleParams(), rho, moment_reference=moment_reference)
    rows = []
    for name, reference in REFERENCE_ADDED_MASS.items():
        derived = getattr(added, name)
        tolerance = AXIAL_TOLERANCE if name == "x_udot" else ADDED_MASS_TOLERANCE
        if reference == 0.0:
            error, passed = None, derived == 0.0
        else:
            error = abs(derived - reference) / abs(reference)
            passed = error <= tolerance
        rows.append(AddedMassRow(name=name, derived=derived, reference=reference, relative_error=error,
                                 tolerance=tolerance, passed=passed))
    return rows
