#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Continuous collision detection of sphere approximated robots.

Every robot sphere moving along a trajectory sweeps a tube closed by two
spheres - :class:`.SweptSphereCurve`. The path of the tube is either the
polyline of sphere centers in the waypoints, or B-spline fitted to them by
least squares::

    op = build_fit_operator(m=32, n=8, degree=2)
    control_points = fit_control_points(op, centers)  # (32, 3) -> (8, 3)

The fit operator depends only on ``(m, n, degree)`` and is cached.

Obstacle edges are traced as directed rays against the tubes. Curves don't
report back face hits, so the edges of each obstacle are oriented to form
strongly connected graph (:func:`orient_edges`) - any vertex inside the swept
volume is then reached by a ray coming from outside::

    scene = orient_scene(dcd.build_scene(meshes))
    result = detect_swept(trajectories, robot, scene, CurveKind.QUADRATIC_BSPLINE, 8)

There is also defined exception tree - see :class:`CurveException` doc-string
for details.
"""
import logging
import functools
from collections import deque

import numpy as np
import scipy.linalg
from scipy.interpolate import BSpline
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import rt
from . import dcd
from . import settings
from . import parallel
from . import kinematics
from .bvh import build_bvh
from .geometry import point_segment_distance
from .datastructures import RayBatch
from .datastructures import CcdResult
from .datastructures import CurveKind
from .datastructures import DirectedEdgeSet
from .datastructures import SweptSphereCurve
from .datastructures import SplineFitOperator


# Variables ===================================================================
logger = logging.getLogger(__name__)

#: Largest accepted condition number of the normal equations.
_MAX_CONDITION = 1e12


# Functions & objects =========================================================
class CurveException(Exception):
    """
    Exception tree::

        - CurveException
          |- FitOperatorException
          `- TrajectoryLengthException
    """
    def __init__(self, message):
        Exception.__init__(self, message)


class FitOperatorException(CurveException):
    def __init__(self, message):
        super(FitOperatorException, self).__init__(message)


class TrajectoryLengthException(CurveException):
    def __init__(self, message):
        super(TrajectoryLengthException, self).__init__(message)


def clamped_knots(n, degree):
    """
    Clamped uniform knot vector of `n` control points over ``[0, 1]``.
    """
    inner = np.linspace(0.0, 1.0, n - degree + 1)
    return np.concatenate([
        np.zeros(degree),
        inner,
        np.ones(degree),
    ])


def basis_matrix(knots, degree, params):
    """
    Returns:
        np.ndarray: ``(len(params), n)`` matrix of basis functions \
                    ``B_i(u_j)``.
    """
    n = len(knots) - degree - 1
    return BSpline(knots, np.eye(n), degree)(params)


@functools.lru_cache(maxsize=128)
def build_fit_operator(m, n, degree):
    """
    Least squares operator fitting `n` control points of clamped uniform
    B-spline to `m` points sampled uniformly in the curve parameter.

    Args:
        m (int): Number of trajectory points.
        n (int): Number of control points.
        degree (int): 2 or 3.

    Returns:
        obj: Cached :class:`.SplineFitOperator` with read-only arrays.

    Raises:
        FitOperatorException: For invalid sizes or singular normal equations.
    """
    if degree not in (2, 3):
        raise FitOperatorException("Unsupported degree %r." % degree)
    if not m >= n >= degree + 1:
        raise FitOperatorException(
            "Need m >= n >= degree + 1, got m=%d, n=%d, degree=%d." % (
                m, n, degree
            )
        )

    knots = clamped_knots(n, degree)
    params = np.linspace(0.0, 1.0, m)
    basis = basis_matrix(knots, degree, params)

    normal = basis.T @ basis
    if np.linalg.cond(normal) > _MAX_CONDITION:
        raise FitOperatorException(
            "Normal equations of m=%d, n=%d are singular." % (m, n)
        )
    pinv = scipy.linalg.solve(normal, basis.T, assume_a="pos")

    for array in (knots, params, basis, pinv):
        array.setflags(write=False)

    logger.debug("Built fit operator m=%d n=%d degree=%d", m, n, degree)
    return SplineFitOperator(
        degree=degree,
        m=m,
        n=n,
        knots=knots,
        params=params,
        basis=basis,
        pinv=pinv,
    )


def fit_control_points(op, points):
    """
    Least squares control points ``P = pinv @ Q``.

    Args:
        op (obj): :class:`.SplineFitOperator`.
        points (np.ndarray): ``(m, ...)`` trajectory points, extra axes are
               fitted independently.

    Returns:
        np.ndarray: ``(n, ...)`` control points.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.shape[0] != op.m:
        raise ValueError("Expected %d points, got %d." % (op.m, len(points)))

    return np.tensordot(op.pinv, points, axes=(1, 0))


def evaluate_curve(curve, params):
    """
    Points of the curve path at `params` in ``[0, 1]``.
    """
    params = np.asarray(params, dtype=np.float64)
    if curve.kind == CurveKind.PIECEWISE_LINEAR:
        points = curve.control_points
        scaled = params * (len(points) - 1)
        index = np.clip(np.floor(scaled).astype(np.int64), 0,
                        max(len(points) - 2, 0))
        local = (scaled - index)[:, None]
        if len(points) == 1:
            return np.repeat(points, len(params), axis=0)
        return (1 - local) * points[index] + local * points[index + 1]

    return BSpline(curve.knots, curve.control_points, curve.degree)(params)


def generate_swept_curves(trajectory, robot, kind, n=None):
    """
    Swept sphere curves of all robot spheres along `trajectory`.

    Args:
        trajectory (np.ndarray): ``(m, dof)`` waypoints.
        robot (obj): :class:`.RobotModel` with spheres.
        kind (str): :class:`.CurveKind`.
        n (int, default None): Control point count of spline kinds.

    Returns:
        list: One :class:`.SweptSphereCurve` per robot sphere, link-major.

    Raises:
        TrajectoryLengthException: If `trajectory` is shorter than `n` or 2.
    """
    trajectory = np.asarray(trajectory, dtype=np.float64)
    m = len(trajectory)

    degree = CurveKind.DEGREES[kind]
    if kind != CurveKind.PIECEWISE_LINEAR and n is None:
        raise ValueError("Spline curves need control point count `n`.")

    if m < max(2, n or 0):
        raise TrajectoryLengthException(
            "Trajectory of %d waypoints is too short for n=%r." % (m, n)
        )

    poses = kinematics.forward_kinematics_batch(trajectory, robot)
    spheres = kinematics.sphere_centers(poses, robot)
    centers = spheres[..., :3]
    radii = spheres[0, :, 3]

    if kind == CurveKind.PIECEWISE_LINEAR:
        return [
            SweptSphereCurve(kind, centers[:, s], radii[s])
            for s in range(len(radii))
        ]

    op = build_fit_operator(m, n, degree)
    control = fit_control_points(op, centers)

    return [
        SweptSphereCurve(kind, control[:, s], radii[s], op.knots)
        for s in range(len(radii))
    ]


class _UnionFind(object):
    def __init__(self, size):
        self.parent = np.arange(size)

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False

        self.parent[max(a, b)] = min(a, b)
        return True


def _triangle_neighbours(mesh):
    neighbours = [[] for _ in range(len(mesh.triangles))]
    for first, second in mesh.edge_triangles:
        neighbours[first].append(second)
        neighbours[second].append(first)

    return neighbours


def _side_edges(mesh):
    """
    Returns:
        np.ndarray: ``(F, 3)`` unique edge index of each triangle side.
    """
    lookup = {tuple(edge): i for i, edge in enumerate(mesh.edges.tolist())}
    sides = np.sort(
        mesh.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 3, 2),
        axis=2
    )

    return np.array(
        [[lookup[tuple(side)] for side in sides_of] for sides_of in
         sides.tolist()],
        dtype=np.int64
    )


def _greedy_orientation(mesh, seed):
    """
    Breadth first growth of alternating triangle cycles. Each edge keeps the
    first orientation it gets.

    Returns:
        np.ndarray: ``(E,)`` +1 for ``edges[i, 0] -> edges[i, 1]``, -1 for
        the reverse.
    """
    random = np.random.RandomState(seed)
    side_edges = _side_edges(mesh)
    neighbours = _triangle_neighbours(mesh)

    # orientation of each triangle side when the triangle follows its winding
    tri = mesh.triangles
    winding = np.where(
        tri[:, [0, 1, 2]] < tri[:, [1, 2, 0]], 1, -1
    ).astype(np.int64)

    orientation = np.zeros(len(mesh.edges), dtype=np.int64)
    preferred = np.zeros(len(tri), dtype=np.int64)
    visited = np.zeros(len(tri), dtype=bool)

    for start in range(len(tri)):
        if visited[start]:
            continue

        preferred[start] = 1 if random.randint(2) else -1
        visited[start] = True
        queue = deque([start])
        while queue:
            face = queue.popleft()
            edges = side_edges[face]
            assigned = orientation[edges]

            agree = np.count_nonzero(assigned == winding[face])
            disagree = np.count_nonzero(assigned == -winding[face])
            if agree > disagree:
                sense = 1
            elif disagree > agree:
                sense = -1
            else:
                sense = preferred[face]

            free = assigned == 0
            orientation[edges[free]] = sense * winding[face][free]

            for other in neighbours[face]:
                if not visited[other]:
                    visited[other] = True
                    preferred[other] = -sense
                    queue.append(other)

    return orientation


def _graph(vertex_count, directed):
    return coo_matrix(
        (np.ones(len(directed)), (directed[:, 0], directed[:, 1])),
        shape=(vertex_count, vertex_count),
    ).tocsr()


def _directed_from(mesh, orientation, duplicated):
    forward = mesh.edges[orientation > 0]
    backward = mesh.edges[orientation < 0][:, ::-1]
    both = mesh.edges[duplicated]

    directed = np.concatenate([forward, backward, both[:, ::-1], both])
    return np.unique(directed, axis=0)


def is_strongly_connected(mesh, directed):
    """
    Check that every weakly connected component of the directed edge graph is
    also strongly connected.
    """
    graph = _graph(len(mesh.vertices), np.asarray(directed))
    weak, _ = connected_components(graph, directed=True, connection="weak")
    strong, _ = connected_components(graph, directed=True, connection="strong")

    return weak == strong


def orient_edges(mesh, seed=None):
    """
    Orient edges of `mesh` so that they form strongly connected directed
    graph on every connected component.

    Greedy orientation is repaired by tracing some edges in both directions:
    strongly connected components are linked along a spanning tree of the
    mesh edges crossing them.

    Args:
        mesh (obj): Watertight :class:`.TriangleMesh`.
        seed (int, default None): Tie-break seed,
             :attr:`~raycollide.settings.ORIENT_SEED` by default.

    Returns:
        obj: :class:`.DirectedEdgeSet`.
    """
    if seed is None:
        seed = settings.ORIENT_SEED

    orientation = _greedy_orientation(mesh, seed)
    duplicated = np.zeros(len(mesh.edges), dtype=bool)

    directed = _directed_from(mesh, orientation, duplicated)
    graph = _graph(len(mesh.vertices), directed)
    _, labels = connected_components(graph, directed=True, connection="strong")

    components = _UnionFind(labels.max() + 1)
    for index in np.flatnonzero(labels[mesh.edges[:, 0]] !=
                                labels[mesh.edges[:, 1]]):
        a, b = labels[mesh.edges[index]]
        if components.union(a, b):
            duplicated[index] = True

    directed = _directed_from(mesh, orientation, duplicated)
    if not is_strongly_connected(mesh, directed):
        raise CurveException("Edge graph repair didn't converge.")

    weak, _ = connected_components(graph, directed=True, connection="weak")
    used = np.unique(mesh.triangles)
    isolated = len(mesh.vertices) - len(used)

    edge_set = DirectedEdgeSet(
        directed=directed,
        duplicated=duplicated,
        component_count=int(weak - isolated),
    )
    logger.info(
        "Oriented %d edges, %.1f %% traced both ways",
        len(mesh.edges),
        100 * edge_set.duplication_ratio,
    )

    return edge_set


def orient_scene(scene, seed=None):
    """
    Attach :class:`.DirectedEdgeSet` of every obstacle to the `scene`.

    Returns:
        obj: New :class:`.CollisionScene`.
    """
    if scene.directed is not None:
        return scene

    return scene._replace(
        directed=tuple(orient_edges(a.mesh, seed) for a in scene.obstacles)
    )


def directed_rays(mesh, edge_set):
    """
    Rays along directed edges.
    """
    starts = mesh.vertices[edge_set.directed[:, 0]]
    ends = mesh.vertices[edge_set.directed[:, 1]]

    return RayBatch.from_segments(starts, ends)


def swept_volume_contains(capsules, points):
    """
    Point membership test of the union of capsules.

    Returns:
        np.ndarray: ``(N,)`` bool.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    inside = np.zeros(len(points), dtype=bool)

    step = max(1, settings.RAY_CHUNK * 16 // max(1, capsules.size))
    for begin in range(0, len(points), step):
        distance = point_segment_distance(
            points[begin:begin + step], capsules.starts, capsules.ends
        )
        inside[begin:begin + step] = np.any(distance <= capsules.radii, axis=1)

    return inside


def _trajectory_in_collision(trajectory, robot, scene, kind, n, rays):
    curves = generate_swept_curves(trajectory, robot, kind, n)
    capsules = rt.curve_capsules(curves)
    tree = build_bvh(capsules)

    for obstacle, obstacle_rays in enumerate(rays):
        hit_rays, _, _ = rt.trace_capsules(tree, obstacle_rays)
        if hit_rays.size:
            return True

        interior = scene.obstacles[obstacle].interior
        if swept_volume_contains(capsules, interior)[0]:
            return True

    return False


def detect_swept(trajectories, robot, scene, kind, n=None, threads=None):
    """
    Swept sphere CCD of a batch of trajectories.

    Curve BVH is built for every trajectory, directed obstacle edges are traced
    against it and interior point of every obstacle is tested for membership
    in the swept volume.

    Args:
        trajectories (list): ``(m, dof)`` waypoint arrays.
        robot (obj): :class:`.RobotModel` with spheres.
        scene (obj): :class:`.CollisionScene`, edges are oriented when not
              already done.
        kind (str): :class:`.CurveKind`.
        n (int, default None): Control points of spline kinds.
        threads (int, default None): Worker count.

    Returns:
        obj: :class:`.CcdResult`.
    """
    if isinstance(robot, dcd.RobotIndex):
        robot = robot.robot

    scene = orient_scene(scene)
    rays = [
        directed_rays(asset.mesh, edge_set)
        for asset, edge_set in zip(scene.obstacles, scene.directed)
    ]

    flags = parallel.map_ordered(
        lambda trajectory: _trajectory_in_collision(
            trajectory, robot, scene, kind, n, rays
        ),
        trajectories,
        threads,
    )

    return CcdResult(np.array(flags, dtype=bool))


def detect_discretized(trajectories, robot, scene, n, batch_size=None):
    """
    Trajectory is in collision if any of its `n` evenly resampled poses is in
    collision by two-way DCD.

    Returns:
        obj: :class:`.CcdResult`.
    """
    if n < 1:
        raise ValueError("`n` has to be at least 1.")
    if not len(trajectories):
        return CcdResult(np.zeros(0, dtype=bool))

    poses = np.concatenate([
        kinematics.resample_trajectory(trajectory, n)
        for trajectory in trajectories
    ])
    result = dcd.detect(poses, robot, scene, dcd.Variant.TWO_WAY,
                        batch_size=batch_size)

    return CcdResult(result.in_collision.reshape(-1, n).any(axis=1))
