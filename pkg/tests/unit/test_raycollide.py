#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import numpy as np
import pytest

import raycollide
from raycollide import dcd
from raycollide import scenes
from raycollide import volumetry
from raycollide.datastructures import CurveKind

from test_ccd import ball  # noqa: F401
from test_ccd import wall  # noqa: F401


# Tests =======================================================================
def test_process_dcd_request(planar_arm):
    scene = dcd.build_scene([scenes.needle(0.3, 0.01, [0.1, 0, 0])])
    configs = np.array([[0, 0], [np.pi / 2, 0]])

    result = raycollide.process_request(
        raycollide.DcdRequest(configs, planar_arm, scene)
    )

    assert isinstance(result, raycollide.DcdResult)
    assert result.in_collision.tolist() == [True, False]
    assert result.detail is None


def test_process_dcd_request_detail(planar_arm):
    scene = dcd.build_scene([scenes.needle(0.3, 0.01, [0.1, 0, 0])])
    configs = np.zeros((3, 2))

    result = raycollide.process_request(
        raycollide.DcdRequest(configs, planar_arm, scene, variant="obs2rob",
                              batch_size=2, detail=True)
    )

    assert result.detail.shape == (3, 2, 1)
    assert result.detail[:, 0, 0].all()


def test_process_ccd_request(ball, wall):  # noqa: F811
    trajectories = [
        np.array([[0.0], [1.0]]),
        np.array([[0.0], [0.3]]),
    ]

    result = raycollide.process_request(
        raycollide.CcdRequest(trajectories, ball, wall,
                              CurveKind.PIECEWISE_LINEAR, None)
    )

    assert isinstance(result, raycollide.CcdResult)
    assert result.in_collision.tolist() == [True, False]


def test_process_ccd_request_discretized(ball, wall):  # noqa: F811
    trajectories = [np.array([[0.0], [1.0]])]

    result = raycollide.process_request(
        raycollide.CcdRequest(trajectories, ball, wall, "discretized", 2)
    )

    assert result.in_collision.tolist() == [False]


def test_process_coverage_request(unit_cube):
    bounds = ([-1, -1, -1], [1, 1, 1])
    truth = volumetry.voxelize_meshes([unit_cube], 0.1, bounds)
    approx = truth.with_occupancy(np.zeros(truth.dims, dtype=bool))

    metrics = raycollide.process_request(
        raycollide.CoverageRequest(approx, truth)
    )

    assert isinstance(metrics, raycollide.CoverageMetrics)
    assert metrics.recall == 0.0


def test_process_request_unknown():
    with pytest.raises(ValueError):
        raycollide.process_request(("configs", "robot", "scene"))


def test_request_types():
    assert raycollide.REQUEST_TYPES == [
        raycollide.DcdRequest,
        raycollide.CcdRequest,
        raycollide.CoverageRequest,
    ]
