#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import pytest

from raycollide import ccd
from raycollide import bench
from raycollide import kinematics
from raycollide import volumetry
from raycollide.datastructures import CurveKind
from raycollide.datastructures import BenchMode
from raycollide.datastructures import BenchConfig


# Variables ===================================================================
RESOLUTION = 0.03
TREND_TOLERANCE = 0.02


# Functions & objects =========================================================
def swept_recall(arm, case, kind, n):
    trajectory, bounds, truth = case
    if kind == CurveKind.PIECEWISE_LINEAR:
        curves = ccd.generate_swept_curves(
            kinematics.resample_trajectory(trajectory, n), arm, kind
        )
    else:
        curves = ccd.generate_swept_curves(trajectory, arm, kind, n)

    grid = volumetry.voxelize_swept_spheres(curves, RESOLUTION, bounds)
    return volumetry.coverage(grid, truth).recall


# Fixtures ====================================================================
@pytest.fixture(scope="module")
def swept_case(arm):
    trajectory = kinematics.halton_trajectories(arm, 1, 32, 5)[0]
    bounds = bench.trajectory_bounds(arm, trajectory)
    truth = volumetry.swept_truth_grid(arm, trajectory, RESOLUTION, bounds)

    return trajectory, bounds, truth


@pytest.fixture(scope="module")
def segment_case(arm):
    """
    Shorter motion between a Halton pose and a point an eighth of the way to
    the next one.
    """
    start, goal = kinematics.sample_halton(2, arm, 9)
    trajectory = kinematics.interpolate_cspace(
        start, start + (goal - start) / 8.0, 32
    )
    bounds = bench.trajectory_bounds(arm, trajectory)
    truth = volumetry.swept_truth_grid(arm, trajectory, RESOLUTION, bounds)

    return trajectory, bounds, truth


# Tests =======================================================================
def test_linear_recall_trend(arm, segment_case):
    recalls = [
        swept_recall(arm, segment_case, CurveKind.PIECEWISE_LINEAR, n)
        for n in (2, 4, 8, 16)
    ]

    for coarse, fine in zip(recalls, recalls[1:]):
        assert fine >= coarse - TREND_TOLERANCE

    assert recalls[2] >= 0.99 - TREND_TOLERANCE
    assert recalls[3] >= 0.99 - TREND_TOLERANCE


def test_quadratic_recall_beats_linear(arm, segment_case):
    linear = swept_recall(arm, segment_case, CurveKind.PIECEWISE_LINEAR, 4)
    quadratic = swept_recall(arm, segment_case, CurveKind.QUADRATIC_BSPLINE,
                             4)

    assert quadratic >= linear - TREND_TOLERANCE


def test_discretized_recall_grows(arm, swept_case):
    trajectory, bounds, truth = swept_case

    def recall(n):
        grid = volumetry.voxelize_robot(
            arm, kinematics.resample_trajectory(trajectory, n), RESOLUTION,
            bounds,
        )
        return volumetry.coverage(grid, truth).recall

    coarse, fine = recall(4), recall(16)

    assert coarse < 1.0
    assert fine >= coarse - 0.01


def test_swept_spheres_cover_truth(arm, swept_case):
    trajectory, bounds, truth = swept_case

    for kind, n in ((CurveKind.PIECEWISE_LINEAR, None),
                    (CurveKind.QUADRATIC_BSPLINE, 8)):
        curves = ccd.generate_swept_curves(trajectory, arm, kind, n)
        grid = volumetry.voxelize_swept_spheres(curves, RESOLUTION, bounds)
        metrics = volumetry.coverage(grid, truth)

        assert metrics.recall > 0.9
        assert 0 < metrics.precision < 1


def test_bench_accuracy():
    config = BenchConfig(
        mode=BenchMode.ACCURACY,
        trajectories=1,
        control_points=[4],
        resolution=0.04,
    )
    records = bench.run(config).records
    by_name = {record.representation: record for record in records}

    assert set(by_name) == {
        "sphere-pose",
        "mesh-pose",
        "mesh-discretized",
        "sphere-linear",
        "sphere-quadratic",
    }
    assert by_name["mesh-pose"].precision == 1.0
    assert by_name["mesh-pose"].recall == 1.0
    assert by_name["sphere-pose"].recall > 0.9
    assert by_name["sphere-linear"].recall >= \
        by_name["mesh-discretized"].recall - 0.01


def test_bench_ccd_oracle():
    config = BenchConfig(
        mode=BenchMode.CCD_QUADRATIC,
        trajectories=4,
        batch_sizes=[4],
        control_points=[8],
        oracle=True,
    )
    record, = bench.run(config).records

    assert record.control_points == 8
    assert record.false_positive_rate is not None
    assert record.false_negative_rate is not None
    assert 0 <= record.false_positive_rate <= 1
    assert 0 <= record.false_negative_rate <= 1
