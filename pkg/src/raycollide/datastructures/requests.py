#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
#= Imports ====================================================================
"""
Request structures, on which :func:`raycollide.process_request` reacts.

All strucutures defined here are simple dataholders, based on `namedtuple`.
"""
from collections import namedtuple


class DcdRequest(namedtuple("DcdRequest", ["configs",
                                           "robot",
                                           "scene",
                                           "variant",
                                           "broad_phase",
                                           "batch_size",
                                           "detail"])):
    """
    Check batch of robot configurations for collisions.

    Attributes:
        configs (np.ndarray): ``(K, dof)`` joint values.
        robot (obj): :class:`.RobotModel`.
        scene (obj): :class:`.CollisionScene` from
              :func:`raycollide.dcd.build_scene`.
        variant (str, default "two-way"): ``obs2rob``, ``rob2obs`` or
                ``two-way``.
        broad_phase (bool, default True): Use OBB broad phase.
        batch_size (int, default None): Split `configs` into batches.
        detail (bool, default False): Return per link / obstacle detail.

    See Also:
        :func:`raycollide.process_request` returns :class:`.DcdResult`.
    """
    def __new__(cls, configs, robot, scene, variant="two-way",
                broad_phase=True, batch_size=None, detail=False):
        return super(DcdRequest, cls).__new__(
            cls, configs, robot, scene, variant, broad_phase, batch_size,
            detail
        )


class CcdRequest(namedtuple("CcdRequest", ["trajectories",
                                           "robot",
                                           "scene",
                                           "kind",
                                           "control_points"])):
    """
    Check batch of trajectories using swept sphere curves.

    Attributes:
        trajectories (list): ``(m, dof)`` waypoint arrays.
        robot (obj): :class:`.RobotModel` with spheres.
        scene (obj): :class:`.CollisionScene` with directed edges.
        kind (str): One of :class:`.CurveKind`, or ``"discretized"`` for
             two-way DCD of `control_points` resampled poses.
        control_points (int): Number of spline control points. Piecewise
                       linear curves use the trajectory waypoints.

    See Also:
        :func:`raycollide.process_request` returns :class:`.CcdResult`.
    """
    pass


class CoverageRequest(namedtuple("CoverageRequest", ["approx", "truth"])):
    """
    Compare two voxel grids.

    Attributes:
        approx (obj): :class:`.VoxelGrid` of the approximated volume.
        truth (obj): :class:`.VoxelGrid` of the true volume.

    See Also:
        :func:`raycollide.process_request` returns :class:`.CoverageMetrics`.
    """
    pass
