"""Tests for the effort cost, the single-shooting transcription and the solver."""

import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.runner.oracles import ORACLE_SOLVER, DoubleIntegratorModel, double_integrator_problem, linear_fit_r2
from engines.errors import ParameterError, SingularityError
from engines.optimization import (
    BoundarySpec,
    ControlBounds,
    FreeParameter,
    SolverConfig,
    TranscribedProblem,
    constant_thrust_baseline,
    effort_cost,
    effort_gradient,
    solve,
    solve_with_free_parameters,
    terminal_residuals,
    transcribe,
)
from engines.optimization.problem import FAILURE_RESIDUAL
from engines.optimization.solver import _Scaled, _inner_solve, initial_guess
from engines.phases import BoostPhaseModel, LaunchPhaseModel
from engines.phases.state import control_array
from engines.simulation import ControlProgram

samples = st.lists(st.floats(-30000.0, 30000.0, allow_nan=False), min_size=2, max_size=40)


class RateModel:
    """x' = u on a single channel."""

    name = "rate"
    n_controls = 1

    def derivative(self, x, controls):
        u = control_array(controls, 1)[0]
        return np.broadcast_to(u, np.shape(x)).astype(float)


class FailingModel(RateModel):
    def derivative(self, x, controls):
        raise SingularityError("forward velocity must be positive")


class ThrustWindowModel(RateModel):
    """Rate model whose propagation fails outside a thrust window, like a speed decaying through zero."""

    def __init__(self, floor=-np.inf, ceiling=np.inf):
        self.floor, self.ceiling = floor, ceiling

    def derivative(self, x, controls):
        u = control_array(controls, 1)[0]
        if np.any(u < self.floor) or np.any(u > self.ceiling):
            raise SingularityError(f"thrust outside [{self.floor}, {self.ceiling}]")
        return super().derivative(x, controls)


def rate_problem(target=1.0, box=(0.0, 10.0), model=None):
    return TranscribedProblem(
        phase="rate",
        model=model or RateModel(),
        boundary=BoundarySpec(initial=(0.0,), terminal=(target,)),
        dt=0.2,
        n_intervals=5,
        control_boxes=[box],
        state_names=("x",),
        residual_scales=(1.0,),
    )


class TestEffortCost:
    """Test cases for the trapezoidal effort cost."""

    def test_constant_thrust(self):
        assert effort_cost(np.full((1, 3), 1000.0), 0.2) == pytest.approx(4.0e5, abs=1e-9)

    def test_null_control(self):
        assert effort_cost(np.zeros((2, 10)), 0.2) == 0.0

    def test_program_input(self):
        program = ControlProgram.constant([1000.0, 0.1], 0.2, 0.4)
        assert effort_cost(program) == pytest.approx(4.0e5)

    def test_ramp_quadrature_error(self):
        """T = 1000 t on [0, 1]: the trapezoid overshoots 1e6/3 by dt^2/12 * 2e6."""
        times = np.arange(6) * 0.2
        error = effort_cost(1000.0 * times[None, :], 0.2) - 1.0e6 / 3.0
        assert error == pytest.approx(0.2**2 / 12.0 * 2.0e6)

    def test_deflection_weight(self):
        program = np.vstack([np.zeros(3), np.full(3, 0.1)])
        assert effort_cost(program, 0.2) == 0.0
        assert effort_cost(program, 0.2, weights=(1.0, 2.0)) == pytest.approx(2.0 * 0.01 * 0.4)

    @given(samples)
    def test_time_reversal_invariant(self, values):
        forward = np.array(values)[None, :]
        assert effort_cost(forward, 0.2) == pytest.approx(effort_cost(forward[:, ::-1], 0.2))

    @given(samples, st.floats(-5.0, 5.0))
    def test_quadratic_scaling(self, values, k):
        base = np.array(values)[None, :]
        assert effort_cost(k * base, 0.2) == pytest.approx(k**2 * effort_cost(base, 0.2), rel=1e-9, abs=1e-6)

    def test_gradient_matches_finite_difference(self, rng):
        values = rng.uniform(0, 100, (1, 7))
        grad = effort_gradient(values, 0.2)
        for k in range(7):
            up, down = values.copy(), values.copy()
            up[0, k] += 1e-4
            down[0, k] -= 1e-4
            numeric = (effort_cost(up, 0.2) - effort_cost(down, 0.2)) / 2e-4
            assert grad[0, k] == pytest.approx(numeric, rel=1e-4)

    @pytest.mark.parametrize("values, dt", [(np.ones((1, 1)), 0.2), (np.ones((1, 3)), 0.0)])
    def test_invalid_input(self, values, dt):
        with pytest.raises(ParameterError):
            effort_cost(values, dt)


class TestTranscription:
    """Test cases for TranscribedProblem and terminal residuals."""

    def test_decision_layout(self, vehicle, env, provider):
        problem = transcribe(
            "boost", BoostPhaseModel(vehicle, env, provider),
            BoundarySpec(initial=(35.0, 0.0, 0.0, 0.8, 0.0), terminal=(None, None, None, 0.0, -600.0)),
            t_final=15.0, free_parameters=[FreeParameter.final_velocity(35.0, 200.0)],
        )
        assert problem.n_intervals == 75
        assert problem.n_decision == 2 * 76 + 1
        assert problem.residual_names == ["u", "theta", "z"]
        assert problem.upper()[76] == pytest.approx(np.radians(12.0))

    def test_t_final_not_multiple(self, vehicle, added, env):
        with pytest.raises(ParameterError):
            transcribe("launch", LaunchPhaseModel(vehicle, added, env),
                       BoundarySpec(initial=(10.0, 0, 0, 0, 100.0), terminal=(35.0, None, None, 0.7, 0.0)),
                       t_final=15.1)

    def test_too_few_intervals(self):
        with pytest.raises(ParameterError):
            TranscribedProblem("rate", RateModel(), BoundarySpec(initial=(0.0,), terminal=(1.0,)), 0.5, 1,
                               [(0.0, 1.0)], state_names=("x",))

    def test_box_count_must_match_controls(self):
        with pytest.raises(ParameterError):
            TranscribedProblem("rate", RateModel(), BoundarySpec(initial=(0.0,), terminal=(1.0,)), 0.2, 5,
                               [(0.0, 1.0), (-1.0, 1.0)], state_names=("x",))

    def test_stub_residual_zero(self):
        """x' = u from 0 with u = 1/t_f lands exactly on 1."""
        problem = rate_problem()
        assert terminal_residuals(np.ones(6), problem) == pytest.approx([0.0], abs=1e-12)

    def test_all_free_terminal_empty_residual(self):
        problem = double_integrator_problem(terminal=(None, None))
        assert terminal_residuals(np.zeros(problem.n_decision), problem).shape == (0,)

    def test_out_of_box_decision_projected(self):
        problem = rate_problem(box=(0.0, 1.0))
        assert terminal_residuals(np.full(6, 5.0), problem) == pytest.approx([0.0], abs=1e-12)

    def test_propagation_failure_penalized(self):
        problem = rate_problem(model=FailingModel())
        assert terminal_residuals(np.ones(6), problem)[0] == FAILURE_RESIDUAL
        assert problem.failed_evaluations == 1

    def test_free_altitude_sign(self):
        problem = TranscribedProblem(
            "rate", RateModel(), BoundarySpec(initial=(0.0,), terminal=(None,)), 0.2, 5, [(-1e3, 1e3)],
            free_parameters=[FreeParameter(name="alt", target="terminal", index=0, lower=500.0, upper=700.0, sign=-1)],
            state_names=("z",),
        )
        assert problem.targets(np.array([600.0]), 1).tolist() == [[-600.0]]

    def test_free_initial_depth_sets_start(self):
        problem = TranscribedProblem(
            "rate", RateModel(), BoundarySpec(initial=(0.0,), terminal=(0.0,)), 0.2, 5, [(-1e3, 1e3)],
            free_parameters=[FreeParameter(name="z0", target="initial", index=0, lower=100.0, upper=500.0)],
            state_names=("z",),
        )
        assert problem.initial_states(np.array([250.0]), 2).tolist() == [[250.0, 250.0]]

    def test_free_parameter_box_validated(self):
        with pytest.raises(ValueError):
            FreeParameter.initial_depth(500.0, 100.0)

    def test_control_bounds_validated(self):
        with pytest.raises(ValueError):
            ControlBounds(thrust_min=10.0, thrust_max=5.0)

    def test_boundary_lengths_validated(self):
        with pytest.raises(ValueError):
            BoundarySpec(initial=(0.0, 0.0), terminal=(1.0,))


class TestSolver:
    """Test cases for the augmented-Lagrangian solver."""

    @pytest.fixture(scope="class")
    def double_integrator(self):
        return solve(double_integrator_problem(), ORACLE_SOLVER)

    def test_double_integrator_cost(self, double_integrator):
        assert double_integrator.converged
        assert double_integrator.cost == pytest.approx(12.0, rel=0.01)

    def test_double_integrator_control_is_linear(self, double_integrator):
        r2 = linear_fit_r2(np.asarray(double_integrator.times), np.asarray(double_integrator.thrust), -12.0, 6.0)
        assert r2 > 0.999

    def test_converged_result_contract(self, double_integrator):
        assert double_integrator.max_residual < ORACLE_SOLVER.constraint_tol
        assert all(abs(a) <= 20.0 for a in double_integrator.thrust)
        assert set(double_integrator.residuals) == {"x", "v"}
        assert double_integrator.trajectory is not None

    def test_result_serialization(self, double_integrator):
        payload = double_integrator.model_dump()
        assert "decision" not in payload and "trajectory" not in payload
        assert double_integrator.program().samples.shape == (1, 21)

    def test_null_control_optimal(self):
        """Target equal to the uncontrolled endpoint: T = 0 is optimal."""
        result = solve(rate_problem(target=0.0))
        assert result.converged
        assert result.cost == 0.0
        assert all(t == 0.0 for t in result.thrust)

    def test_bounds_hold_on_every_sample(self):
        result = solve(rate_problem(target=1.0, box=(0.0, 10.0)))
        assert result.converged
        assert min(result.thrust) >= 0.0 and max(result.thrust) <= 10.0
        assert result.cost == pytest.approx(1.0, rel=0.02)

    def test_unreachable_target_not_converged(self):
        result = solve(rate_problem(target=100.0, box=(0.0, 1.0)),
                       SolverConfig(max_outer=5, max_inner=50))
        assert not result.converged
        assert result.thrust == pytest.approx([1.0] * 6)

    def test_guess_shape_checked(self):
        with pytest.raises(ParameterError):
            solve(rate_problem(), guess=np.zeros(3))

    def test_deterministic(self):
        first = solve(rate_problem(target=0.7))
        second = solve(rate_problem(target=0.7))
        assert first.thrust == second.thrust
        assert first.cost == second.cost

    def test_inner_solve_at_high_penalty(self):
        """One augmented-Lagrangian subproblem at mu = 1e8 closes in a handful of steps."""
        config = SolverConfig(gradient_tol=1e-5, max_inner=25)
        s = _Scaled(double_integrator_problem(dt=0.1), config)
        y, iterations, pg_norm, failed = _inner_solve(s, np.zeros(len(s.lo)), np.zeros(2), 1e8)
        c, _, _ = s.constraints(y)
        assert not failed
        assert pg_norm < config.gradient_tol
        assert iterations < 25
        assert np.max(np.abs(c)) < 1e-4

    def test_inner_solve_holds_active_bounds(self):
        """Samples pushed against the upper edge stay there and report zero projected gradient."""
        s = _Scaled(rate_problem(target=100.0, box=(0.0, 1.0)), SolverConfig())
        y, _, pg_norm, _ = _inner_solve(s, np.full(len(s.lo), 0.5), np.zeros(1), 1e6)
        assert y == pytest.approx(s.hi)
        assert pg_norm == 0.0


class TestBaselineAndFreeParameters:
    """Test cases for the constant-thrust baseline and free boundary scalars."""

    def test_baseline_on_double_integrator(self):
        """Only x(1) = 1 fixed: constant a = 2 costs 4."""
        baseline = constant_thrust_baseline(double_integrator_problem(dt=0.1, terminal=(1.0, None)))
        assert baseline.matched == "x"
        assert baseline.thrust == pytest.approx(2.0, abs=1e-3)
        assert baseline.cost == pytest.approx(4.0, rel=1e-3)
        assert baseline.feasible

    def test_optimum_dominates_baseline(self):
        """The optimal ramp a = 3(1 - t) costs 3, below the constant baseline."""
        problem = double_integrator_problem(dt=0.1, terminal=(1.0, None))
        baseline = constant_thrust_baseline(problem)
        result = solve(problem, ORACLE_SOLVER)
        assert result.converged
        assert result.cost == pytest.approx(3.0, rel=0.03)
        assert result.cost <= baseline.cost * 1.01

    def test_baseline_without_sign_change(self):
        assert constant_thrust_baseline(rate_problem(target=100.0, box=(0.0, 1.0))) is None

    def test_baseline_when_low_thrust_fails(self):
        """The bracket shrinks to the lowest thrust that propagates before bisecting."""
        problem = rate_problem(target=1.0, box=(0.0, 10.0), model=ThrustWindowModel(floor=0.25))
        baseline = constant_thrust_baseline(problem)
        assert baseline is not None
        assert baseline.thrust == pytest.approx(1.0, abs=1e-3)
        assert baseline.feasible

    def test_baseline_when_high_thrust_fails(self):
        problem = rate_problem(target=1.0, box=(0.0, 10.0), model=ThrustWindowModel(ceiling=4.0))
        baseline = constant_thrust_baseline(problem)
        assert baseline is not None
        assert baseline.thrust == pytest.approx(1.0, abs=1e-3)

    def test_baseline_target_beyond_propagating_range(self):
        """x(1) = 6 needs T = 6, which fails; the narrowed bracket has no sign change."""
        problem = rate_problem(target=6.0, box=(0.0, 10.0), model=ThrustWindowModel(ceiling=4.0))
        assert constant_thrust_baseline(problem) is None

    def test_baseline_when_every_thrust_fails(self):
        assert constant_thrust_baseline(rate_problem(model=FailingModel())) is None

    def test_initial_guess_uses_baseline_past_failing_bound(self):
        problem = rate_problem(target=1.0, box=(0.0, 10.0), model=ThrustWindowModel(floor=0.25))
        assert initial_guess(problem) == pytest.approx([1.0] * 6, abs=1e-3)

    def test_baseline_needs_constraint(self):
        with pytest.raises(ParameterError):
            constant_thrust_baseline(double_integrator_problem(terminal=(None, None)))

    def test_baseline_unknown_component(self):
        with pytest.raises(ParameterError):
            constant_thrust_baseline(rate_problem(), match="theta")

    def test_degenerate_box_matches_fixed_solve(self):
        fixed = solve(double_integrator_problem(dt=0.1), ORACLE_SOLVER)
        pinned_problem = TranscribedProblem(
            phase="double_integrator",
            model=DoubleIntegratorModel(),
            boundary=BoundarySpec(initial=(0.0, 0.0), terminal=(None, 0.0)),
            dt=0.1,
            n_intervals=10,
            control_boxes=[(-20.0, 20.0)],
            free_parameters=[FreeParameter(name="xf", target="terminal", index=0, lower=1.0, upper=1.0,
                                           scale=1.0)],
            substeps=1,
            state_names=("x", "v"),
            residual_scales=(1.0, 1.0),
        )
        pinned = solve_with_free_parameters(pinned_problem, ORACLE_SOLVER)
        assert pinned.free_parameters == {"xf": 1.0}
        assert pinned.cost == pytest.approx(fixed.cost, rel=1e-6)

    def test_free_parameters_required(self):
        with pytest.raises(ParameterError):
            solve_with_free_parameters(rate_problem())


@pytest.mark.integration
class TestLaunchScenarioSolve:
    """Full launch transcription with the default vehicle."""

    def test_launch_45deg_converges_within_bounds(self, vehicle, added, env, provider):
        problem = transcribe(
            "launch", LaunchPhaseModel(vehicle, added, env, provider),
            BoundarySpec(initial=(10.0, 0.0, 0.0, 0.0, 100.0), terminal=(35.0, None, None, np.radians(45.0), 0.0)),
            t_final=15.0, name="launch_45deg",
        )
        started = time.perf_counter()
        result = solve(problem)
        elapsed = time.perf_counter() - started
        assert result.converged, result.diagnostics
        assert result.max_residual < SolverConfig().constraint_tol
        assert elapsed < 600.0
        assert np.isfinite(result.cost) and result.cost > 0
        assert min(result.thrust) >= 0.0 and max(result.thrust) <= 30000.0
        baseline = constant_thrust_baseline(problem)
        if baseline is not None and baseline.feasible:
            assert result.cost <= baseline.cost * 1.01
