"""Properties of the bundled scenario suite: model agreement, feasibility, sweep trends and reproducibility."""

from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from app.runner import optimize_scenario, run_sweep, simulate_scenario
from app.utils import parse_scenario, parse_sweep, write_sweep_csv
from engines.simulation import ControlProgram

pytestmark = pytest.mark.integration

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

SINGLE_PHASE_SCENARIOS = sorted(
    path.stem for path in SCENARIO_DIR.glob("*.scenario") if not path.stem.startswith("combined")
)


@lru_cache(maxsize=None)
def sweep_rows(name: str):
    """Serial run of a bundled sweep, shared across the tests of this module."""
    return tuple(run_sweep(parse_sweep(SCENARIO_DIR / f"{name}.sweep"), jobs=1))


def costs(name: str):
    rows = sweep_rows(name)
    assert all(row.status == "converged" for row in rows), [(row.value, row.status) for row in rows]
    return [row.cost for row in rows]


class TestSimplifiedAgainstSixDofFullRun:
    """Full-length propagations of one program through the phase model and the 6-DOF model."""

    @pytest.mark.parametrize("name, samples", [
        ("launch_45deg", [15000.0]),
        ("boost_45deg", [30000.0, 0.0]),
    ])
    def test_final_state_agrees(self, name, samples):
        spec = parse_scenario(SCENARIO_DIR / f"{name}.scenario")
        program = ControlProgram.constant(samples, spec.dt, spec.t_f)

        report = simulate_scenario(spec, program=program, six_dof=True)

        travelled = abs(report.six_dof.final_state[11] - spec.initial[4])
        assert report.six_dof.times[-1] == pytest.approx(spec.t_f)
        assert report.differences["u_relative"] < 0.05
        assert report.differences["theta_deg"] < 2.0
        assert report.differences["z_abs"] <= 0.05 * travelled


class TestFeasibilityContract:
    """Every bundled single-phase scenario converges inside its boxes."""

    @pytest.mark.parametrize("name", SINGLE_PHASE_SCENARIOS)
    def test_converged_within_bounds(self, name):
        spec = parse_scenario(SCENARIO_DIR / f"{name}.scenario")

        result = optimize_scenario(spec)

        assert result.converged, (result.status, result.diagnostics)
        assert result.max_residual < spec.solver.constraint_tol
        assert min(result.thrust) >= spec.bounds.thrust_min
        assert max(result.thrust) <= spec.bounds.thrust_max
        if result.deflection:
            assert np.max(np.abs(result.deflection)) <= spec.bounds.deflection_max + 1e-12
        assert "dominance_violated" not in result.diagnostics


class TestSweepTrends:
    """Orderings and argmin locations over the bundled sweeps."""

    @pytest.mark.parametrize("name", ["vertical_depth", "launch_uf", "boost_uf", "boost_altitude"])
    def test_cost_increasing(self, name):
        values = costs(name)
        assert all(later > earlier for earlier, later in zip(values, values[1:])), values

    def test_boost_cost_decreasing_in_final_time(self):
        """Checked over the final times that converge."""
        feasible = [row.cost for row in sweep_rows("boost_tf") if row.status == "converged"]
        assert len(feasible) >= 2
        assert all(later < earlier for earlier, later in zip(feasible, feasible[1:])), feasible

    def test_launch_exit_pitch_interior_argmin(self):
        values = costs("launch_theta_exit")
        best = int(np.argmin(values))
        assert 0 < best < len(values) - 1, values


class TestFreeScalarsAtLowerEdge:
    """Monotone-cost free scalars settle on the lower edge of their box."""

    def test_exit_speed(self):
        result = optimize_scenario(parse_scenario(SCENARIO_DIR / "launch_free_uf.scenario"))
        assert result.converged
        assert result.free_parameters["uf"] == pytest.approx(35.0, abs=0.05)

    def test_vertical_launch_depth(self):
        result = optimize_scenario(parse_scenario(SCENARIO_DIR / "vertical_free_depth.scenario"))
        assert result.converged
        assert result.free_parameters["z0"] == pytest.approx(100.0, abs=0.5)


class TestSweepReproducibility:
    """Sweep CSVs are byte-identical between serial and parallel runs."""

    def test_serial_and_four_workers_identical(self, tmp_path):
        sweep = parse_sweep(SCENARIO_DIR / "vertical_depth.sweep")
        serial = write_sweep_csv(list(sweep_rows("vertical_depth")), tmp_path / "serial.csv")
        parallel = write_sweep_csv(run_sweep(sweep, jobs=4), tmp_path / "parallel.csv")
        again = write_sweep_csv(run_sweep(sweep, jobs=1), tmp_path / "again.csv")

        assert parallel.read_bytes() == serial.read_bytes()
        assert again.read_bytes() == serial.read_bytes()
