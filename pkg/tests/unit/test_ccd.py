#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import numpy as np
import pytest

from raycollide import rt
from raycollide import mesh
from raycollide import ccd
from raycollide import dcd
from raycollide import scenes
from raycollide import kinematics
from raycollide import settings
from raycollide.datastructures import CurveKind
from raycollide.datastructures import SweptSphereCurve

from test_dcd import slider


# Variables ===================================================================
PIERCE_RADIUS = 0.1
PIERCE_BUDGET = 1e-3
PIERCINGS = [
    (y, z, depth)
    for y, z, depth in np.random.RandomState(17).uniform(
        [-0.1, -0.1, 0.002], [0.1, 0.1, 0.08], (50, 3)
    )
]


# Functions & objects =========================================================
def sphere_slider(radius, offset=(0, 0, 0)):
    robot = slider(scenes.icosphere(0.04), offset=offset)
    return robot._replace(links=(
        robot.links[0]._replace(spheres=np.array([[0, 0, 0, radius]])),
    ))


def random_walks(count, m=32, dof=7, seed=5):
    steps = np.random.RandomState(seed).normal(scale=0.1, size=(m, count, dof))
    return np.cumsum(steps, axis=0)


def fit_residual(n, degree, walks):
    op = ccd.build_fit_operator(len(walks), n, degree)
    fitted = np.tensordot(op.basis, ccd.fit_control_points(op, walks),
                          axes=(1, 0))

    return np.linalg.norm(fitted - walks, axis=(0, 2))


# Fixtures ====================================================================
@pytest.fixture(scope="module")
def ball():
    """
    One sphere of radius 0.05 sliding along x.
    """
    return sphere_slider(0.05)


@pytest.fixture(scope="module")
def wall():
    return dcd.build_scene([scenes.box([0.02, 0.4, 0.4], [0.5, 0, 0])])


@pytest.fixture(scope="module")
def pierced_wall():
    """
    Thick wall with front face at x = 0.5 and its refinement for
    :attr:`PIERCE_BUDGET` deep misses.
    """
    body = scenes.box([0.12, 0.3, 0.3], [0.56, 0, 0])
    r_max = mesh.incircle_radius_for_depth(PIERCE_RADIUS, PIERCE_BUDGET)

    return body, mesh.split_triangles(body, r_max)


# Tests =======================================================================
def test_clamped_knots():
    knots = ccd.clamped_knots(5, 2)

    assert np.allclose(knots, [0, 0, 0, 1 / 3.0, 2 / 3.0, 1, 1, 1])


@pytest.mark.parametrize("degree", [2, 3])
def test_fit_operator_left_inverse(degree):
    op = ccd.build_fit_operator(32, 8, degree)

    assert op.basis.shape == (32, 8)
    assert op.pinv.shape == (8, 32)
    assert np.allclose(op.pinv @ op.basis, np.eye(8), atol=1e-9)
    assert np.allclose(op.basis.sum(axis=1), 1)


def test_fit_operator_matches_lstsq():
    op = ccd.build_fit_operator(32, 6, 2)
    points = np.random.RandomState(0).normal(size=(32, 3))

    expected, _, _, _ = np.linalg.lstsq(op.basis, points, rcond=None)

    assert np.allclose(ccd.fit_control_points(op, points), expected)


def test_fit_operator_cached():
    assert ccd.build_fit_operator(16, 4, 2) is ccd.build_fit_operator(16, 4, 2)

    with pytest.raises(ValueError):
        ccd.build_fit_operator(16, 4, 2).pinv[0, 0] = 1.0


def test_fit_operator_errors():
    with pytest.raises(ccd.FitOperatorException):
        ccd.build_fit_operator(4, 8, 2)

    with pytest.raises(ccd.FitOperatorException):
        ccd.build_fit_operator(32, 2, 2)

    with pytest.raises(ccd.FitOperatorException):
        ccd.build_fit_operator(32, 8, 4)


def test_fit_reproduces_spline():
    op = ccd.build_fit_operator(32, 7, 3)
    control = np.random.RandomState(1).uniform(-1, 1, (7, 3))
    curve = SweptSphereCurve(CurveKind.CUBIC_BSPLINE, control, 0.1, op.knots)

    samples = ccd.evaluate_curve(curve, op.params)

    assert np.allclose(ccd.fit_control_points(op, samples), control)


@pytest.mark.parametrize("degree,coarse,fine", [
    (2, 4, 8),
    (3, 4, 8),
    (2, 4, 6),
    (3, 5, 7),
    (3, 5, 11),
])
def test_fit_residual_refined_knots(degree, coarse, fine):
    """
    Span count of `fine` is a multiple of `coarse`, so the coarse spline
    space is contained in the fine one.
    """
    walks = random_walks(1000)

    before = fit_residual(coarse, degree, walks)
    after = fit_residual(fine, degree, walks)

    assert np.all(after <= before * (1 + 1e-9) + 1e-12)
    assert np.mean(after) < np.mean(before)


def test_fit_interpolates_end_points():
    op = ccd.build_fit_operator(32, 4, 2)
    points = np.column_stack([
        np.linspace(0, 1, 32), np.linspace(0, 1, 32) ** 2, np.zeros(32),
    ])
    curve = SweptSphereCurve(CurveKind.QUADRATIC_BSPLINE,
                             ccd.fit_control_points(op, points), 0.1, op.knots)

    assert np.allclose(ccd.evaluate_curve(curve, op.params), points)


def test_evaluate_piecewise_linear():
    curve = SweptSphereCurve(CurveKind.PIECEWISE_LINEAR,
                             [[0, 0, 0], [1, 0, 0], [1, 2, 0]], 0.1)

    points = ccd.evaluate_curve(curve, [0, 0.25, 0.5, 0.75, 1])

    assert np.allclose(points, [[0, 0, 0], [0.5, 0, 0], [1, 0, 0], [1, 1, 0],
                                [1, 2, 0]])


def test_generate_swept_curves(arm):
    trajectory = kinematics.halton_trajectories(arm, 1, 32)[0]

    linear = ccd.generate_swept_curves(trajectory, arm,
                                       CurveKind.PIECEWISE_LINEAR)
    quadratic = ccd.generate_swept_curves(trajectory, arm,
                                          CurveKind.QUADRATIC_BSPLINE, 8)

    assert len(linear) == len(quadratic) == 62
    assert linear[0].control_points.shape == (32, 3)
    assert quadratic[0].control_points.shape == (8, 3)
    assert quadratic[5].radius == linear[5].radius

    spheres = kinematics.sphere_centers(
        kinematics.forward_kinematics_batch(trajectory[[0, -1]], arm), arm
    )
    assert np.allclose(linear[10].start, spheres[0, 10, :3])
    assert np.allclose(linear[10].end, spheres[1, 10, :3])


def test_generate_swept_curves_errors(arm):
    trajectory = kinematics.halton_trajectories(arm, 1, 6)[0]

    with pytest.raises(ccd.TrajectoryLengthException):
        ccd.generate_swept_curves(trajectory, arm,
                                  CurveKind.QUADRATIC_BSPLINE, 8)

    with pytest.raises(ccd.TrajectoryLengthException):
        ccd.generate_swept_curves(trajectory[:1], arm,
                                  CurveKind.PIECEWISE_LINEAR)

    with pytest.raises(ValueError):
        ccd.generate_swept_curves(trajectory, arm, CurveKind.CUBIC_BSPLINE)


@pytest.mark.parametrize("body", [
    scenes.box([1, 1, 1]),
    scenes.icosphere(0.5, subdivisions=2),
    scenes.torus(0.3, 0.08),
    scenes.fin(0.5, 0.01),
])
def test_orient_edges(body):
    edge_set = ccd.orient_edges(body)

    assert ccd.is_strongly_connected(body, edge_set.directed)
    assert edge_set.component_count == 1
    assert len(edge_set.directed) == len(body.edges) + \
        np.count_nonzero(edge_set.duplicated)


def test_orient_edges_tetrahedron():
    tetrahedron = mesh.make_mesh(
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
    )
    edge_set = ccd.orient_edges(tetrahedron)

    assert len(edge_set.directed) == 6
    assert not edge_set.duplicated.any()
    assert edge_set.duplication_ratio == 0.0
    assert ccd.is_strongly_connected(tetrahedron, edge_set.directed)


@pytest.mark.parametrize("body", [
    scenes.box([1, 1, 1]),
    scenes.box([1.2, 0.8, 0.05]),
    scenes.icosphere(0.5, subdivisions=1),
    scenes.icosphere(0.5, subdivisions=4),
    scenes.torus(0.3, 0.08),
    scenes.fin(0.5, 0.01),
    scenes.capsule(0.2, 0.05),
])
def test_orient_edges_duplication_ratio(body, ring):
    assert ccd.orient_edges(body).duplication_ratio <= 0.25
    first = ccd.orient_edges(ring, seed=3)
    second = ccd.orient_edges(ring, seed=3)

    assert np.array_equal(first.directed, second.directed)


def test_orient_scene():
    scene = dcd.build_scene([scenes.box([1, 1, 1]),
                             scenes.icosphere(0.1, [3, 0, 0])])

    oriented = ccd.orient_scene(scene)

    assert scene.directed is None
    assert len(oriented.directed) == 2
    assert ccd.orient_scene(oriented) is oriented


def test_directed_rays(unit_cube):
    edge_set = ccd.orient_edges(unit_cube)
    rays = ccd.directed_rays(unit_cube, edge_set)

    ends = rays.origins + rays.directions * rays.t_max[:, None]
    assert np.allclose(ends, unit_cube.vertices[edge_set.directed[:, 1]])


def test_swept_volume_contains():
    curves = [SweptSphereCurve(CurveKind.PIECEWISE_LINEAR,
                               [[0, 0, 0], [1, 0, 0]], 0.1)]
    capsules = rt.curve_capsules(curves)

    inside = ccd.swept_volume_contains(
        capsules, [[0.5, 0.05, 0], [1.05, 0, 0], [0.5, 0.2, 0], [-0.2, 0, 0]]
    )

    assert inside.tolist() == [True, True, False, False]


@pytest.mark.parametrize("kind,n", [
    (CurveKind.PIECEWISE_LINEAR, None),
    (CurveKind.QUADRATIC_BSPLINE, 4),
    (CurveKind.CUBIC_BSPLINE, 5),
])
def test_detect_swept(ball, wall, kind, n):
    crossing = kinematics.interpolate_cspace([0.0], [1.0], 32)
    short = kinematics.interpolate_cspace([0.0], [0.3], 32)
    back = kinematics.interpolate_cspace([-0.2], [-0.9], 32)

    result = ccd.detect_swept([crossing, short, back], ball, wall, kind, n)

    assert result.in_collision.tolist() == [True, False, False]


def test_detect_swept_tunneling(ball, wall):
    """
    End poses are on both sides of the wall, none of them collides.
    """
    trajectory = kinematics.interpolate_cspace([0.2], [0.8], 2)

    swept = ccd.detect_swept([trajectory], ball, wall,
                             CurveKind.PIECEWISE_LINEAR)
    discretized = ccd.detect_discretized([trajectory], ball, wall, 2)

    assert swept.in_collision.tolist() == [True]
    assert discretized.in_collision.tolist() == [False]


def test_detect_swept_obstacle_inside_tube(ball):
    scene = dcd.build_scene([scenes.icosphere(0.01, [0.5, 0, 0], 1)])
    trajectory = kinematics.interpolate_cspace([0.0], [1.0], 32)

    result = ccd.detect_swept([trajectory], ball, scene,
                              CurveKind.QUADRATIC_BSPLINE, 4)

    assert result.in_collision.tolist() == [True]


def test_detect_swept_threads(arm, simple_scene):
    trajectories = kinematics.halton_trajectories(arm, 4, 32)

    single = ccd.detect_swept(trajectories, arm, simple_scene,
                              CurveKind.QUADRATIC_BSPLINE, 8, threads=1)
    pooled = ccd.detect_swept(trajectories, dcd.prepare_robot(arm),
                              simple_scene, CurveKind.QUADRATIC_BSPLINE, 8,
                              threads=3)

    assert np.array_equal(single.in_collision, pooled.in_collision)


def test_detect_discretized(ball, wall):
    crossing = kinematics.interpolate_cspace([0.0], [1.0], 32)
    short = kinematics.interpolate_cspace([0.0], [0.3], 32)

    result = ccd.detect_discretized([crossing, short], ball, wall, 16)

    assert result.in_collision.tolist() == [True, False]
    assert ccd.detect_discretized([], ball, wall, 8).in_collision.size == 0

    with pytest.raises(ValueError):
        ccd.detect_discretized([crossing], ball, wall, 0)


def test_face_piercing_needs_split():
    """
    Sphere dips 2 mm into a wall face far from every edge of the face.
    """
    robot = sphere_slider(0.05, offset=[0, 0.1, 0])
    obstacle = scenes.box([0.02, 0.4, 0.4], [0.5, 0, 0])
    trajectory = np.array([[0.0], [0.442]])

    missed = ccd.detect_swept([trajectory], robot, dcd.build_scene([obstacle]),
                              CurveKind.PIECEWISE_LINEAR)
    assert missed.in_collision.tolist() == [False]

    r_max = mesh.incircle_radius_for_depth(0.05, 0.001)
    refined = mesh.split_triangles(obstacle, r_max)
    caught = ccd.detect_swept([trajectory], robot, dcd.build_scene([refined]),
                              CurveKind.PIECEWISE_LINEAR)

    assert caught.in_collision.tolist() == [True]


@pytest.mark.parametrize("y,z,depth", PIERCINGS)
def test_face_piercing_depth_bound(pierced_wall, y, z, depth):
    """
    Sphere runs into the front face of a thick wall at random spot and depth.
    A miss may only be as deep as a sphere cap fitting in the largest
    incircle, refined wall catches every case.
    """
    obstacle, refined = pierced_wall
    robot = sphere_slider(PIERCE_RADIUS, offset=[0, y, z])
    front = obstacle.vertices[:, 0].min()
    trajectory = np.array([[0.0], [front - PIERCE_RADIUS + depth]])

    penetration = trajectory[-1, 0] + PIERCE_RADIUS - front
    assert penetration == pytest.approx(depth)

    missed = not ccd.detect_swept(
        [trajectory], robot, dcd.build_scene([obstacle]),
        CurveKind.PIECEWISE_LINEAR,
    ).in_collision[0]
    if missed:
        r_max = mesh.inscribed_circle_radii(obstacle.corners).max()
        bound = mesh.max_penetration_bound(PIERCE_RADIUS, r_max)

        assert penetration <= bound + settings.FLATTEN_TOLERANCE

    caught = ccd.detect_swept([trajectory], robot, dcd.build_scene([refined]),
                              CurveKind.PIECEWISE_LINEAR)

    assert caught.in_collision.tolist() == [True]
