#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import numpy as np
import pytest

from raycollide import ccd
from raycollide import dcd
from raycollide import mesh
from raycollide import oracle
from raycollide import scenes
from raycollide import kinematics
from raycollide.datastructures import CurveKind


# Variables ===================================================================
DENSE_POSES = 256
DEPTH_BUDGET = 1e-3


# Functions & objects =========================================================
def decided(labels):
    return np.array([label is not None for label in labels])


def margin_label(trajectory, curves, robot, meshes):
    """
    Dense sphere label of `trajectory`, None when the clearance is within the
    curve approximation error.
    """
    label, margin = oracle.dense_sphere_label(trajectory, robot, meshes,
                                              DENSE_POSES)
    dense = kinematics.sphere_centers(
        kinematics.forward_kinematics_batch(
            kinematics.resample_trajectory(trajectory, DENSE_POSES), robot
        ),
        robot,
    )[..., :3]

    if margin > 2 * oracle.chord_error(curves, dense) + DEPTH_BUDGET:
        return label
    return None


# Fixtures ====================================================================
@pytest.fixture(scope="module")
def refined_scene(arm, medium_meshes):
    r_max = mesh.incircle_radius_for_depth(arm.spheres[:, 3].min(),
                                           DEPTH_BUDGET)
    refined = [mesh.split_triangles(body, r_max) for body in medium_meshes]

    return ccd.orient_scene(dcd.build_scene(refined))


# Tests =======================================================================
def test_dcd_two_way_matches_oracle(arm, medium_meshes):
    scene = dcd.build_scene(medium_meshes)
    configs = kinematics.sample_halton(40, arm, seed_offset=11)

    labels = [oracle.pose_label(q, arm, medium_meshes) for q in configs]
    result = dcd.detect(configs, arm, scene)

    mask = decided(labels)
    truth = np.array([bool(label) for label in labels])

    assert mask.sum() >= 30
    assert np.array_equal(result.in_collision[mask], truth[mask])


def test_dcd_planar_sweep_matches_oracle(planar_arm):
    meshes = [
        scenes.box([0.1, 0.1, 0.3], [0.6, 0.3, 0]),
        scenes.icosphere(0.08, [-0.5, 0.2, 0]),
    ]
    scene = dcd.build_scene(meshes)
    angles = np.linspace(-3.0, 3.0, 73)
    configs = np.column_stack([angles, np.full_like(angles, 0.4)])

    labels = [oracle.pose_label(q, planar_arm, meshes) for q in configs]
    mask = decided(labels)
    truth = np.array([bool(label) for label in labels])

    for use_broad_phase in (True, False):
        result = dcd.detect(configs, planar_arm, scene,
                            broad_phase=use_broad_phase)
        assert np.array_equal(result.in_collision[mask], truth[mask])

    assert truth[mask].any()
    assert not truth[mask].all()


def test_ccd_linear_matches_dense_spheres(arm, medium_meshes, refined_scene):
    trajectories = kinematics.halton_trajectories(arm, 100, 32, 7)

    result = ccd.detect_swept(trajectories, arm, refined_scene,
                              CurveKind.PIECEWISE_LINEAR)

    compared = 0
    for trajectory, flag in zip(trajectories, result.in_collision):
        curves = ccd.generate_swept_curves(trajectory, arm,
                                           CurveKind.PIECEWISE_LINEAR)
        label = margin_label(trajectory, curves, arm, medium_meshes)

        if label is not None:
            assert flag == label
            compared += 1

    assert compared >= 50


def test_ccd_quadratic_no_false_negatives(arm, medium_meshes, refined_scene):
    trajectories = kinematics.halton_trajectories(arm, 40, 32, 19)

    result = ccd.detect_swept(trajectories, arm, refined_scene,
                              CurveKind.QUADRATIC_BSPLINE, 8)

    positives = 0
    for trajectory, flag in zip(trajectories, result.in_collision):
        curves = ccd.generate_swept_curves(trajectory, arm,
                                           CurveKind.QUADRATIC_BSPLINE, 8)
        label = margin_label(trajectory, curves, arm, medium_meshes)

        if label:
            assert flag
            positives += 1

    assert positives >= 3
