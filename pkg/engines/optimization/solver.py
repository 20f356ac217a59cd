"""Augmented-Lagrangian solver with a projected Gauss-Newton inner loop on scaled variables."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from engines.errors import HydroboostError, ParameterError
from engines.simulation import ControlProgram, Trajectory, integrate, IntegratorConfig
from .baseline import constant_thrust_baseline
from .problem import TranscribedProblem

logger = logging.getLogger(__name__)

SolverStatus = Literal["converged", "infeasible", "max_iterations"]


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    constraint_tol: float = Field(1e-2, gt=0, description="Max |terminal residual| in natural units")
    gradient_tol: float = Field(1e-3, gt=0, description="Projected-gradient norm on scaled variables")
    max_outer: int = Field(30, ge=1)
    max_inner: int = Field(500, ge=1)
    penalty_initial: float = Field(10.0, gt=0)
    penalty_growth: float = Field(10.0, gt=1)
    penalty_cap: float = Field(1e10, gt=0)
    progress_factor: float = Field(4.0, gt=1, description="Required shrink of max residual per outer step")
    fd_relative_step: float = Field(1e-6, gt=0)
    fd_thrust_floor: float = Field(1e-2, gt=0, description="Absolute floor of the thrust difference step (N)")
    armijo: float = Field(1e-4, gt=0, lt=1)
    max_backtracks: int = Field(40, ge=1)
    newton_damping: float = Field(1e-2, gt=0, description="Diagonal shift relative to the largest effort curvature")
    active_width: float = Field(1e-3, gt=0, description="Bound distance below which a variable may be held")


class OptimizationResult(BaseModel):
    """Optimal control program, its cost and terminal residuals."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = ""
    phase: str
    status: SolverStatus
    cost: float
    iterations: int
    residuals: Dict[str, float]
    free_parameters: Dict[str, float] = {}
    dt: float
    thrust: List[float]
    deflection: List[float] = []
    max_residual: float
    outer_iterations: int = 0
    diagnostics: List[str] = []
    baseline_cost: Optional[float] = None
    decision: List[float] = Field(default_factory=list, exclude=True)
    trajectory: Optional[Trajectory] = Field(None, exclude=True)

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def times(self) -> List[float]:
        return [k * self.dt for k in range(len(self.thrust))]

    def program(self) -> ControlProgram:
        rows = [self.thrust] + ([self.deflection] if self.deflection else [])
        return ControlProgram(dt=self.dt, samples=np.array(rows))


@dataclass
class _Scaled:
    """The problem seen through y = z / scale."""

    problem: TranscribedProblem
    config: SolverConfig

    def __post_init__(self):
        p = self.problem
        self.scale = p.scales()
        self.lo = p.lower() / self.scale
        self.hi = p.upper() / self.scale
        channel_scale = [max(abs(lo), abs(hi)) or 1.0 for lo, hi in p.control_boxes]
        weights = (list(p.weights) + [0.0] * p.n_controls)[:p.n_controls]
        self.cost_ref = sum(w * s**2 for w, s in zip(weights, channel_scale)) * p.t_final or 1.0
        floors = np.full(len(self.scale), self.config.fd_relative_step)
        thrust_slots = slice(0, p.n_samples)
        floors[thrust_slots] = np.maximum(floors[thrust_slots], self.config.fd_thrust_floor / self.scale[thrust_slots])
        self.fd_steps = floors
        # effort is a diagonal quadratic in z, so its gradient at y = 1 is the Hessian diagonal
        self.hessian = self.objective(np.ones(len(self.scale)))[1]

    def physical(self, y: np.ndarray) -> np.ndarray:
        return y * (self.scale if y.ndim == 1 else self.scale[:, None])

    def project(self, y: np.ndarray) -> np.ndarray:
        return np.clip(y, self.lo, self.hi)

    def objective(self, y: np.ndarray) -> Tuple[float, np.ndarray]:
        z = self.physical(y)
        value = self.problem.effort(z) / self.cost_ref
        grad = self.problem.effort_gradient(z) * self.scale / self.cost_ref
        return value, grad

    def constraints(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, bool]:
        """(normalized residuals, physical residuals, failed) at a single point."""
        residuals, failed = self.problem.residual_matrix(self.physical(y)[:, None])
        return self.problem.normalized(residuals[:, 0]), residuals[:, 0], bool(failed[0])

    def constraints_with_jacobian(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
        """Residuals plus their forward-difference Jacobian from one batched propagation."""
        n = len(y)
        steps = np.where(y + self.fd_steps > self.hi, -self.fd_steps, self.fd_steps)
        columns = np.repeat(y[:, None], n + 1, axis=1)
        columns[np.arange(n), np.arange(1, n + 1)] += steps
        residuals, failed = self.problem.residual_matrix(self.physical(columns))
        normalized = self.problem.normalized(residuals)
        base = normalized[:, 0]
        jacobian = (normalized[:, 1:] - base[:, None]) / steps[None, :]
        if failed[1:].any():
            jacobian[:, failed[1:]] = 0.0
        return base, residuals[:, 0], jacobian, bool(failed[0])


def _lagrangian(f: float, c: np.ndarray, lam: np.ndarray, mu: float) -> float:
    return f + float(lam @ c) + 0.5 * mu * float(c @ c)


def _projected_gradient_norm(s: _Scaled, y: np.ndarray, grad: np.ndarray) -> float:
    return float(np.max(np.abs(s.project(y - grad) - y))) if len(y) else 0.0


def _newton_direction(
    s: _Scaled, y: np.ndarray, grad: np.ndarray, jac: np.ndarray, mu: float, pg_norm: float
) -> np.ndarray:
    """Projected Gauss-Newton direction on the augmented Lagrangian.

    Variables within ``min(active_width, pg_norm)`` of a bound that the gradient
    pushes outward take a plain gradient step; the rest solve
    (H_f + mu * J^T J + damping) d = -g on their block.
    """
    cfg = s.config
    width = min(cfg.active_width, pg_norm)
    held = ((y <= s.lo + width) & (grad > 0)) | ((y >= s.hi - width) & (grad < 0))
    free = ~held
    direction = -grad.copy()
    if not free.any():
        return direction
    block = jac[:, free]
    model = mu * (block.T @ block)
    damping = cfg.newton_damping * (float(np.max(s.hessian)) or 1.0)
    model[np.diag_indices_from(model)] += s.hessian[free] + damping
    for _ in range(3):
        try:
            factor = cho_factor(model)
        except LinAlgError:
            model[np.diag_indices_from(model)] += 10.0 * damping
            damping *= 10.0
            continue
        direction[free] = -cho_solve(factor, grad[free])
        return direction
    logger.debug("Gauss-Newton model not positive definite; using the gradient direction")
    return direction


def _arc_search(
    s: _Scaled,
    y: np.ndarray,
    grad: np.ndarray,
    value: float,
    direction: np.ndarray,
    lam: np.ndarray,
    mu: float,
) -> Optional[np.ndarray]:
    """Armijo backtracking along the projection arc P(y + alpha d); None when no step is accepted."""
    cfg = s.config
    alpha = 1.0
    for _ in range(cfg.max_backtracks):
        trial = s.project(y + alpha * direction)
        move = trial - y
        slope = float(grad @ move)
        if not np.any(move):
            return None
        if slope < 0:
            f_trial, _ = s.objective(trial)
            c_trial, _, failed_trial = s.constraints(trial)
            if not failed_trial and _lagrangian(f_trial, c_trial, lam, mu) <= value + cfg.armijo * slope:
                return trial
        alpha *= 0.5
    return None


def _inner_solve(s: _Scaled, y: np.ndarray, lam: np.ndarray, mu: float) -> Tuple[np.ndarray, int, float, bool]:
    """Minimize the augmented Lagrangian over the box. Returns (y, iterations, pg_norm, failed)."""
    cfg = s.config
    f, gf = s.objective(y)
    c, _, jac, failed = s.constraints_with_jacobian(y)
    value = _lagrangian(f, c, lam, mu)
    grad = gf + jac.T @ (lam + mu * c)
    pg_norm = np.inf

    for iteration in range(1, cfg.max_inner + 1):
        pg_norm = _projected_gradient_norm(s, y, grad)
        if pg_norm < cfg.gradient_tol:
            return y, iteration - 1, pg_norm, failed

        trial = _arc_search(s, y, grad, value, _newton_direction(s, y, grad, jac, mu, pg_norm), lam, mu)
        if trial is None:
            fallback = -grad / max(1.0, float(np.max(np.abs(grad))))
            trial = _arc_search(s, y, grad, value, fallback, lam, mu)
        if trial is None:
            logger.debug(f"Line search stalled at inner iteration {iteration} (pg={pg_norm:.3e})")
            return y, iteration, pg_norm, failed

        y = trial
        f, gf = s.objective(y)
        c, _, jac, failed = s.constraints_with_jacobian(y)
        value = _lagrangian(f, c, lam, mu)
        grad = gf + jac.T @ (lam + mu * c)

    pg_norm = _projected_gradient_norm(s, y, grad)
    return y, cfg.max_inner, pg_norm, failed


def initial_guess(problem: TranscribedProblem) -> np.ndarray:
    """Constant baseline thrust (or mid-box), zero deflection, free scalars at their lower edge."""
    baseline = constant_thrust_baseline(problem) if problem.constrained_indices else None
    lo, hi = problem.control_boxes[0]
    thrust = baseline.thrust if baseline is not None else 0.5 * (lo + hi)
    samples = np.zeros((problem.n_controls, problem.n_samples))
    samples[0] = thrust
    for k in range(1, problem.n_controls):
        samples[k] = np.clip(0.0, *problem.control_boxes[k])
    return problem.pack(samples, [f.lower for f in problem.free_parameters])


def solve(
    problem: TranscribedProblem,
    config: Optional[SolverConfig] = None,
    guess: Optional[np.ndarray] = None,
) -> OptimizationResult:
    """Minimum-effort solve by augmented Lagrangian on the terminal equality residuals."""
    config = config or SolverConfig()
    s = _Scaled(problem, config)
    z0 = initial_guess(problem) if guess is None else np.asarray(guess, dtype=float)
    if z0.shape != (problem.n_decision,):
        raise ParameterError(f"initial guess has shape {z0.shape}, expected ({problem.n_decision},)")
    y = s.project(z0 / s.scale)

    n_res = len(problem.constrained_indices)
    lam = np.zeros(n_res)
    mu = config.penalty_initial
    total_inner = 0
    status: SolverStatus = "max_iterations"
    diagnostics: List[str] = []
    previous_violation = np.inf
    outer = 0
    logger.info(
        f"Solving {problem.name or problem.phase}: N={problem.n_intervals}, "
        f"decision length {problem.n_decision}, constrained {problem.residual_names}"
    )

    for outer in range(1, config.max_outer + 1):
        y, inner_iterations, pg_norm, failed = _inner_solve(s, y, lam, mu)
        total_inner += inner_iterations
        c, physical, failed = s.constraints(y)
        if failed:
            diagnostics.append(f"propagation_failed@outer{outer}")
        violation = float(np.max(np.abs(c))) if n_res else 0.0
        max_physical = float(np.max(np.abs(physical))) if n_res else 0.0
        logger.debug(
            f"outer {outer}: mu={mu:.1e}, max|c|={violation:.3e}, max residual={max_physical:.3e}, "
            f"pg={pg_norm:.3e}, inner={inner_iterations}"
        )
        if not failed and max_physical < config.constraint_tol and pg_norm < config.gradient_tol:
            status = "converged"
            break

        lam = lam + mu * c
        if violation > previous_violation / config.progress_factor:
            mu *= config.penalty_growth
            if mu > config.penalty_cap:
                status = "infeasible"
                diagnostics.append("penalty cap exceeded without residual progress")
                break
        previous_violation = min(previous_violation, violation)

    return build_result(problem, s.physical(y), status, total_inner, outer, diagnostics)


def build_result(
    problem: TranscribedProblem,
    z: np.ndarray,
    status: SolverStatus,
    iterations: int,
    outer: int,
    diagnostics: List[str],
) -> OptimizationResult:
    z = problem.project(z)
    samples, free = problem.unpack(z)
    residuals, failed = problem.residual_matrix(z[:, None])
    residuals = residuals[:, 0]
    if failed[0]:
        diagnostics = diagnostics + ["propagation_failed"]
    result = OptimizationResult(
        name=problem.name,
        phase=problem.phase,
        status=status,
        cost=problem.effort(z),
        iterations=iterations,
        outer_iterations=outer,
        residuals={name: float(r) for name, r in zip(problem.residual_names, residuals)},
        free_parameters={f.name: float(v) for f, v in zip(problem.free_parameters, free)},
        dt=problem.dt,
        thrust=samples[0].tolist(),
        deflection=samples[1].tolist() if problem.n_controls > 1 else [],
        max_residual=float(np.max(np.abs(residuals))) if len(residuals) else 0.0,
        diagnostics=diagnostics,
        decision=z.tolist(),
        trajectory=None if failed[0] else trajectory_of(problem, z),
    )
    log = logger.info if status == "converged" else logger.warning
    log(
        f"Solve {problem.name or problem.phase} finished: status={status}, J={result.cost:.6g}, "
        f"max residual={result.max_residual:.3e}, iterations={iterations}"
    )
    return result


def trajectory_of(problem: TranscribedProblem, z: np.ndarray) -> Optional[Trajectory]:
    """Re-propagate the optimal program on the solver's own substep grid."""
    samples, free = problem.unpack(problem.project(z))
    x0 = problem.initial_states(free, 1)[:, 0]
    program = ControlProgram(dt=problem.dt, samples=samples)
    try:
        return integrate(
            problem.model.derivative,
            x0,
            program,
            problem.t_final,
            IntegratorConfig(step=problem.dt / problem.substeps),
            state_names=problem.state_names,
            control_names=("T", "theta_T")[: problem.n_controls],
        )
    except HydroboostError as e:
        logger.warning(f"Could not rebuild trajectory for {problem.name or problem.phase}: {e}")
        return None


def solve_with_free_parameters(
    problem: TranscribedProblem,
    config: Optional[SolverConfig] = None,
) -> OptimizationResult:
    """Solve with free boundary scalars appended to the decision vector."""
    if not problem.free_parameters:
        raise ParameterError("solve_with_free_parameters needs at least one free parameter")
    for free in problem.free_parameters:
        if not (np.isfinite(free.lower) and np.isfinite(free.upper)):
            raise ParameterError(f"free parameter '{free.name}' needs a finite box")
    result = solve(problem, config)
    logger.info(f"Free-parameter optimum: {result.free_parameters}")
    return result
