"""Tests for combined launch + boost cost tables."""

import pandas as pd
import pytest

from app.runner import combined_cost, costs_from_sweep
from engines.errors import AlignmentError

LAUNCH = {20.0: 9.0, 45.0: 4.0, 90.0: 1.0}
BOOST = {20.0: 2.0, 45.0: 3.0, 90.0: 8.0}


class TestCombinedCost:
    """Test cases for combined_cost."""

    def test_totals_and_minimum(self):
        report = combined_cost(LAUNCH, BOOST)
        assert [row.angle_deg for row in report.rows] == [20.0, 45.0, 90.0]
        assert [row.total for row in report.rows] == [11.0, 7.0, 9.0]
        assert [row.minimum for row in report.rows] == [False, True, False]
        assert report.best_angle_deg == 45.0
        assert report.vertical_row is None

    def test_vertical_row_uses_ninety_degree_boost(self):
        report = combined_cost(LAUNCH, BOOST, vertical_launch_cost=0.5)
        assert report.vertical_row.launch_mode == "vertical"
        assert report.vertical_row.boost_cost == 8.0
        assert report.vertical_row.total == 8.5
        assert not report.vertical_row.minimum

    def test_explicit_subset(self):
        report = combined_cost(LAUNCH, {**BOOST, 35.0: 1.0}, angles=[90.0, 20.0])
        assert [row.angle_deg for row in report.rows] == [90.0, 20.0]
        assert report.best_angle_deg == 90.0

    def test_empty_inputs(self):
        with pytest.raises(AlignmentError):
            combined_cost({}, BOOST)

    def test_mismatched_angles(self):
        with pytest.raises(AlignmentError, match="do not match"):
            combined_cost(LAUNCH, {20.0: 2.0, 45.0: 3.0})

    def test_missing_angle_in_subset(self):
        with pytest.raises(AlignmentError, match="boost"):
            combined_cost(LAUNCH, {20.0: 2.0}, angles=[20.0, 45.0])

    def test_vertical_needs_ninety_degree_boost(self):
        with pytest.raises(AlignmentError):
            combined_cost({45.0: 1.0}, {45.0: 2.0}, vertical_launch_cost=1.0)


class TestCostsFromSweep:
    """Test cases for costs_from_sweep."""

    def test_only_converged_rows(self):
        frame = pd.DataFrame({
            "value": [20.0, 45.0, 90.0],
            "cost": [1.5, float("nan"), 2.5],
            "status": ["converged", "error", "max_iterations"],
        })
        assert costs_from_sweep(frame) == {20.0: 1.5}
