"""Scenario-file parsing and result export."""

from .exporters import (
    read_table,
    result_payload,
    write_combined_csv,
    write_program_csv,
    write_result_json,
    write_sweep_csv,
    write_trajectory_csv,
)
from .scenario_file import parse_scenario, parse_sweep

__all__ = [
    "parse_scenario",
    "parse_sweep",
    "read_table",
    "result_payload",
    "write_combined_csv",
    "write_program_csv",
    "write_result_json",
    "write_sweep_csv",
    "write_trajectory_csv",
]
