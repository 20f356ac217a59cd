"""Tests for the scenario-to-files workflow driven through the CLI."""

import json
from unittest.mock import patch

import pandas as pd
import pytest
from typer.testing import CliRunner

from app.main import app
from engines.optimization import OptimizationResult

runner = CliRunner()


def fake_result(status: str) -> OptimizationResult:
    return OptimizationResult(
        name="launch_45deg",
        phase="launch",
        status=status,
        cost=1.25e8,
        iterations=40,
        residuals={"u": 1e-3, "theta": 2e-4, "z": -5e-3},
        dt=0.2,
        thrust=[15000.0] * 76,
        max_residual=5e-3,
    )


class TestOptimizeWorkflow:
    """Test cases for optimize from scenario file to exported results."""

    @patch("app.runner.scenario_runner.solve_problem")
    def test_converged_result_written(self, mock_solve, scenario_dir, tmp_path):
        """A converged solve exits 0 and writes the JSON result and program."""
        mock_solve.return_value = fake_result("converged")

        result = runner.invoke(app, ["optimize", str(scenario_dir / "launch_45deg.scenario"),
                                     "--out", str(tmp_path)])

        assert result.exit_code == 0, result.output
        problem = mock_solve.call_args[0][0]
        assert problem.residual_names == ["u", "theta", "z"]
        payload = json.loads((tmp_path / "launch_45deg.json").read_text())
        assert payload["status"] == "converged"
        assert payload["times"][-1] == pytest.approx(15.0)
        program = pd.read_csv(tmp_path / "launch_45deg_program.csv")
        assert len(program) == 76

    @patch("app.runner.scenario_runner.solve_problem")
    def test_non_convergence_exits_two(self, mock_solve, scenario_dir, tmp_path):
        """Results are still written when the solver stops short."""
        mock_solve.return_value = fake_result("max_iterations")

        result = runner.invoke(app, ["optimize", str(scenario_dir / "launch_45deg.scenario"),
                                     "--out", str(tmp_path)])

        assert result.exit_code == 2
        assert (tmp_path / "launch_45deg.json").exists()

    @patch("app.runner.scenario_runner.solve_problem")
    def test_combined_writes_both_legs(self, mock_solve, scenario_dir, tmp_path):
        """Combined scenarios export one result per leg."""
        launch = fake_result("converged")
        boost = launch.model_copy(update={"name": "combined_45deg/boost", "phase": "boost",
                                          "deflection": [0.0] * 76})
        mock_solve.side_effect = [launch, boost]

        result = runner.invoke(app, ["optimize", str(scenario_dir / "combined_45deg.scenario"),
                                     "--out", str(tmp_path)])

        assert result.exit_code == 0, result.output
        assert [call[0][0].phase for call in mock_solve.call_args_list] == ["launch", "boost"]
        assert (tmp_path / "combined_45deg_launch.json").exists()
        assert (tmp_path / "combined_45deg_boost_program.csv").exists()


@pytest.mark.integration
class TestLaunchWorkflow:
    """End-to-end solve of a bundled launch scenario."""

    def test_launch_45deg(self, scenario_dir, tmp_path):
        result = runner.invoke(app, ["optimize", str(scenario_dir / "launch_45deg.scenario"),
                                     "--out", str(tmp_path)])

        assert result.exit_code == 0, result.output
        payload = json.loads((tmp_path / "launch_45deg.json").read_text())
        assert payload["status"] == "converged"
        assert all(0.0 <= t <= 30000.0 for t in payload["thrust"])
        assert all(abs(r) <= 1e-2 for r in payload["residuals"].values())
