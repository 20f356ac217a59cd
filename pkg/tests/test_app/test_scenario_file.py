"""Tests for scenario and sweep file parsing."""

import math

import pytest

from app.config import Settings
from app.utils import parse_scenario, parse_sweep
from engines.errors import ScenarioParseError
from engines.optimization import FreeParameter


class TestParseScenario:
    """Test cases for parse_scenario."""

    def test_minimal_defaults(self, minimal_launch_file):
        spec = parse_scenario(minimal_launch_file)
        assert spec.name == "minimal"
        assert spec.phase == "launch"
        assert spec.launch_mode == "horizontal"
        assert spec.initial == (10.0, 0.0, 0.0, 0.0, 100.0)
        assert spec.terminal[0] == 35.0
        assert spec.terminal[1] is None and spec.terminal[2] is None
        assert spec.terminal[3] == pytest.approx(math.radians(45.0))
        assert spec.terminal[4] == 0.0
        assert spec.dt == 0.2
        assert spec.bounds.thrust_max == 30000.0
        assert spec.weights == (1.0, 0.0)
        assert spec.free_parameters == []

    def test_bundled_launch(self, scenario_dir):
        spec = parse_scenario(scenario_dir / "launch_45deg.scenario")
        assert spec.name == "launch_45deg"
        assert spec.t_f == 15.0
        assert spec.terminal[3] == pytest.approx(math.radians(45.0))

    def test_bundled_boost_uses_altitude(self, scenario_dir):
        spec = parse_scenario(scenario_dir / "boost_45deg.scenario")
        assert spec.phase == "boost"
        assert spec.initial[3] == pytest.approx(math.radians(45.0))
        assert spec.terminal[4] == -600.0

    def test_vertical_defaults(self, write_file):
        path = write_file("v.scenario", "[scenario]\nlaunch_mode = vertical\nt_f = 10\n\n[initial]\nz = 300\n")
        spec = parse_scenario(path)
        assert spec.initial[3] == pytest.approx(math.pi / 2)
        assert spec.terminal[3] == pytest.approx(math.pi / 2)
        assert spec.initial[4] == 300.0

    def test_t_f_not_multiple_of_dt(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15.1\n\n[terminal]\ntheta = 45\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_scenario(path)
        assert "multiple" in str(exc_info.value)
        assert exc_info.value.line == 2
        assert exc_info.value.field == "scenario.t_f"

    def test_unknown_key_reports_line(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n\n[terminal]\ntheta = 45\nspeed = 3\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_scenario(path)
        assert exc_info.value.line == 6
        assert exc_info.value.field == "terminal.speed"

    def test_unknown_section(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n[engine]\nisp = 250\n")
        with pytest.raises(ScenarioParseError, match="unknown section"):
            parse_scenario(path)

    def test_non_numeric_value(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = soon\n[terminal]\ntheta = 45\n")
        with pytest.raises(ScenarioParseError, match="number"):
            parse_scenario(path)

    def test_missing_final_time(self, write_file):
        path = write_file("bad.scenario", "[terminal]\ntheta = 45\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_scenario(path)
        assert exc_info.value.field == "scenario.t_f"

    def test_free_initial_rejected(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n[initial]\nu = free\n[terminal]\ntheta = 45\n")
        with pytest.raises(ScenarioParseError, match="terminal"):
            parse_scenario(path)

    def test_horizontal_launch_needs_exit_pitch(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n")
        with pytest.raises(ScenarioParseError, match="pitch"):
            parse_scenario(path)

    def test_boost_needs_initial_pitch(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nphase = boost\nt_f = 15\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_scenario(path)
        assert exc_info.value.field == "initial.theta"

    def test_boost_section_outside_combined(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n[boost]\nt_f = 15\n")
        with pytest.raises(ScenarioParseError, match="combined"):
            parse_scenario(path)

    def test_free_parameters(self, write_file):
        path = write_file("free.scenario",
                          "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\nu = free\n[free]\nuf = 35, 60\n")
        spec = parse_scenario(path)
        assert spec.free_parameters == [FreeParameter.final_velocity(35.0, 60.0)]
        assert spec.terminal[0] is None

    def test_free_box_out_of_order(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n[free]\nz0 = 500, 100\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_scenario(path)
        assert exc_info.value.field == "free.z0"

    def test_bounds_in_degrees(self, write_file):
        path = write_file("b.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n"
                                        "[bounds]\nthrust_max = 25000\ndeflection_max = 10\n")
        spec = parse_scenario(path)
        assert spec.bounds.thrust_max == 25000.0
        assert spec.bounds.deflection_max == pytest.approx(math.radians(10.0))

    def test_invalid_bounds(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n"
                                          "[bounds]\nthrust_min = 5000\nthrust_max = 100\n")
        with pytest.raises(ScenarioParseError, match="bounds"):
            parse_scenario(path)

    def test_invalid_vehicle(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n[vehicle]\nx_cb = 3.5\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_scenario(path)
        assert exc_info.value.field == "vehicle"

    def test_coefficient_table_relative_path(self, write_file, coefficient_table):
        path = write_file("t.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n"
                                        "[coefficients]\ntable = coefficients.csv\n")
        spec = parse_scenario(path)
        assert spec.coefficient_table == str(coefficient_table.resolve())

    def test_missing_coefficient_table(self, write_file):
        path = write_file("bad.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n"
                                          "[coefficients]\ntable = nowhere.csv\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_scenario(path)
        assert exc_info.value.field == "coefficients.table"
        assert exc_info.value.line == 6

    def test_placeholder_preset_with_override(self, write_file):
        path = write_file("c.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n"
                                        "[coefficients]\npreset = placeholder\npitch_damping = -300\n")
        spec = parse_scenario(path)
        assert spec.coefficients.axial == -0.30
        assert spec.coefficients.pitch_damping == -300.0

    def test_solver_section(self, write_file):
        path = write_file("s.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n"
                                        "[solver]\nconstraint_tol = 0.05\nmax_inner = 100\n"
                                        "hold = zero_order\ndeflection_weight = 0.5\n")
        spec = parse_scenario(path)
        assert spec.solver.constraint_tol == 0.05
        assert spec.solver.max_inner == 100
        assert spec.hold == "zero_order"
        assert spec.weights == (1.0, 0.5)

    def test_environment_setting_beats_file(self, write_file, monkeypatch):
        monkeypatch.setattr("app.utils.scenario_file.settings", Settings(_env_file=None, CONSTRAINT_TOL=0.5))
        path = write_file("s.scenario", "[scenario]\nt_f = 15\n[terminal]\ntheta = 45\n"
                                        "[solver]\nconstraint_tol = 0.05\nmax_inner = 100\n")
        spec = parse_scenario(path)
        assert spec.solver.constraint_tol == 0.5
        assert spec.solver.max_inner == 100

    def test_combined_boost_leg(self, scenario_dir):
        spec = parse_scenario(scenario_dir / "combined_45deg.scenario")
        assert spec.phase == "combined"
        assert spec.boost_t_f is not None
        assert spec.boost_terminal[4] < 0


class TestParseSweep:
    """Test cases for parse_sweep."""

    def test_bundled_sweep(self, scenario_dir):
        sweep = parse_sweep(scenario_dir / "launch_theta_exit.sweep")
        assert sweep.parameter == "theta_exit"
        assert sweep.values == [20.0, 35.0, 45.0, 55.0, 65.0, 75.0, 90.0]
        assert sweep.base.name == "launch_45deg"

    def test_paired_tf_length_checked(self, write_file, minimal_launch_file):
        path = write_file("s.sweep", "[sweep]\nbase = minimal.scenario\nparameter = z0\n"
                                     "values = 100, 200\npaired_tf = 4\n")
        with pytest.raises(ScenarioParseError):
            parse_sweep(path)

    def test_unknown_parameter(self, write_file, minimal_launch_file):
        path = write_file("s.sweep", "[sweep]\nbase = minimal.scenario\nparameter = mass\nvalues = 1\n")
        with pytest.raises(ScenarioParseError) as exc_info:
            parse_sweep(path)
        assert exc_info.value.field == "sweep.parameter"

    def test_missing_base(self, write_file):
        path = write_file("s.sweep", "[sweep]\nbase = gone.scenario\nparameter = z0\nvalues = 1\n")
        with pytest.raises(ScenarioParseError, match="base"):
            parse_sweep(path)
