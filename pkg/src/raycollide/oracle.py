#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Brute force reference checks.

Nothing here uses the BVH or the watertight kernel: triangles are compared by
Möller's interval overlap test, containment by generalized winding number,
rays by Möller-Trumbore, spheres by exact point-triangle distance and curves
by dense capsule subdivision. Labels are ``True`` / ``False``, or ``None`` when
the configuration is within the contact band and can't be decided.
"""
import logging

import numpy as np

from . import settings
from . import kinematics
from .ccd import evaluate_curve
from .mesh import inflate_mesh
from .geometry import aabb
from .geometry import normalize
from .geometry import transform_points
from .geometry import point_segment_distance
from .geometry import point_triangle_distance


# Variables ===================================================================
logger = logging.getLogger(__name__)

CONTACT_BAND = 1e-5
_PAIR_CHUNK = 1 << 18


# Functions & objects =========================================================
def _dot(a, b):
    return np.einsum("...j,...j->...", a, b)


def _plane_distances(corners, plane):
    normal = np.cross(plane[:, 1] - plane[:, 0], plane[:, 2] - plane[:, 0])
    return _dot(corners - plane[:, None, 0], normal[:, None]), normal


def _isolated_vertex(d):
    d0, d1, d2 = d[:, 0], d[:, 1], d[:, 2]

    return np.select(
        [d0 * d1 > 0, d0 * d2 > 0, (d1 * d2 > 0) | (d0 != 0), d1 != 0],
        [2, 1, 0, 1],
        default=2,
    )


def _interval(projection, d):
    alone = _isolated_vertex(d)
    rows = np.arange(len(d))
    first = (alone + 1) % 3
    second = (alone + 2) % 3

    pa, da = projection[rows, alone], d[rows, alone]
    lower = []
    for other in (first, second):
        pb, db = projection[rows, other], d[rows, other]
        denominator = da - db
        denominator = np.where(denominator != 0, denominator, 1.0)
        lower.append(pa + (pb - pa) * da / denominator)

    return np.minimum(*lower), np.maximum(*lower)


def triangles_intersect(first, second):
    """
    Möller's interval overlap test of triangle pairs. Coplanar pairs are
    reported as disjoint.

    Args:
        first (np.ndarray): ``(N, 3, 3)`` corners.
        second (np.ndarray): ``(N, 3, 3)`` corners.

    Returns:
        np.ndarray: ``(N,)`` bool.
    """
    first = np.asarray(first, dtype=np.float64).reshape(-1, 3, 3)
    second = np.asarray(second, dtype=np.float64).reshape(-1, 3, 3)

    d_first, normal_second = _plane_distances(first, second)
    d_second, normal_first = _plane_distances(second, first)

    separated = (
        np.all(d_first > 0, axis=1) | np.all(d_first < 0, axis=1) |
        np.all(d_second > 0, axis=1) | np.all(d_second < 0, axis=1)
    )
    coplanar = np.all(d_first == 0, axis=1) | np.all(d_second == 0, axis=1)

    line = np.cross(normal_first, normal_second)
    axis = np.argmax(np.abs(line), axis=1)
    rows = np.arange(len(first))

    low_a, high_a = _interval(first[rows, :, axis], d_first)
    low_b, high_b = _interval(second[rows, :, axis], d_second)
    overlap = np.maximum(low_a, low_b) <= np.minimum(high_a, high_b)

    return overlap & ~separated & ~coplanar


def any_triangles_intersect(corners_a, corners_b):
    """
    True if any triangle of `corners_a` intersects any of `corners_b`.
    """
    lower_b = corners_b.min(axis=1)
    upper_b = corners_b.max(axis=1)
    box_lower, box_upper = lower_b.min(axis=0), upper_b.max(axis=0)

    # only triangles touching the other set's box can intersect
    a_lower = corners_a.min(axis=1)
    a_upper = corners_a.max(axis=1)
    near = np.all((a_lower <= box_upper) & (a_upper >= box_lower), axis=1)
    corners_a = corners_a[near]
    a_lower, a_upper = a_lower[near], a_upper[near]

    step = max(1, _PAIR_CHUNK // max(1, len(corners_b)))
    for begin in range(0, len(corners_a), step):
        block = slice(begin, begin + step)
        touching = np.all(
            (a_lower[block, None] <= upper_b[None]) &
            (a_upper[block, None] >= lower_b[None]),
            axis=2,
        )
        i, j = np.nonzero(touching)
        if not len(i):
            continue

        if triangles_intersect(corners_a[block][i], corners_b[j]).any():
            return True

    return False


def winding_numbers(corners, points):
    """
    Generalized winding number of closed triangle surface around `points`
    (sum of signed solid angles by Van Oosterom and Strackee).

    Returns:
        np.ndarray: ``(N,)``, about 1 inside and 0 outside.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    total = np.zeros(len(points))

    step = max(1, _PAIR_CHUNK // max(1, len(corners)))
    for begin in range(0, len(points), step):
        p = points[begin:begin + step, None, None, :]
        a, b, c = np.moveaxis(corners[None] - p, 2, 0)

        la = np.linalg.norm(a, axis=-1)
        lb = np.linalg.norm(b, axis=-1)
        lc = np.linalg.norm(c, axis=-1)
        numerator = _dot(a, np.cross(b, c))
        denominator = (
            la * lb * lc + _dot(a, b) * lc + _dot(b, c) * la + _dot(c, a) * lb
        )
        total[begin:begin + step] = np.sum(
            2 * np.arctan2(numerator, denominator), axis=1
        )

    return total / (4 * np.pi)


def contains_points(corners, points):
    return winding_numbers(corners, points) > 0.5


def meshes_intersect(mesh_a, transform_a, mesh_b, transform_b):
    """
    Volume intersection of two posed closed meshes: surfaces cross or one
    mesh holds a vertex of the other.
    """
    vertices_a = transform_points(transform_a, mesh_a.vertices)
    vertices_b = transform_points(transform_b, mesh_b.vertices)

    lower_a, upper_a = aabb(vertices_a)
    lower_b, upper_b = aabb(vertices_b)
    if np.any(lower_a > upper_b) or np.any(lower_b > upper_a):
        return False

    corners_a = vertices_a[mesh_a.triangles]
    corners_b = vertices_b[mesh_b.triangles]
    if any_triangles_intersect(corners_a, corners_b):
        return True

    return bool(
        contains_points(corners_b, vertices_a[:1]).any() or
        contains_points(corners_a, vertices_b[:1]).any()
    )


def mesh_pair_label(mesh_a, transform_a, mesh_b, transform_b, band=None):
    """
    Decide collision of the pair if it is clear of the contact band: `mesh_a`
    is grown and shrunk by `band` and both answers have to agree.

    Returns:
        bool: Label, None inside the band.
    """
    if band is None:
        band = CONTACT_BAND

    grown = meshes_intersect(inflate_mesh(mesh_a, band), transform_a,
                             mesh_b, transform_b)
    if not grown:
        return False

    shrunk = meshes_intersect(inflate_mesh(mesh_a, -band), transform_a,
                              mesh_b, transform_b)
    if shrunk:
        return True

    return None


def pose_label(config, robot, obstacles, band=None):
    """
    Brute force label of one configuration against obstacle meshes.

    Returns:
        bool: True if any link / obstacle pair surely collides, False if all
        pairs are surely separated, None otherwise.
    """
    poses = kinematics.forward_kinematics_batch(
        np.asarray(config, dtype=np.float64).reshape(1, -1), robot
    )

    undecided = False
    for link_index, link in enumerate(robot.links):
        for obstacle in obstacles:
            label = mesh_pair_label(
                link.mesh,
                poses.transforms[0, link_index],
                obstacle,
                np.eye(4),
                band,
            )
            if label:
                return True
            undecided |= label is None

    return None if undecided else False


def obb_pair_label(a, b, samples=9):
    """
    Sampling check of OBB overlap, conclusive only when a sampled point of one
    box lies in the other (overlap) or a box is outside of the other one's
    local AABB (separation).
    """
    grid = np.linspace(-1.0, 1.0, samples)
    unit = np.stack(np.meshgrid(grid, grid, grid, indexing="ij"), -1)
    unit = unit.reshape(-1, 3)

    for first, second in ((a, b), (b, a)):
        points = first.center + (unit * first.half_extents) @ first.rotation.T
        if second.contains(points).any():
            return True

        local = (first.corners() - second.center) @ second.rotation
        if np.any(local.min(axis=0) > second.half_extents) or \
           np.any(local.max(axis=0) < -second.half_extents):
            return False

    return None


def ray_triangles(origin, direction, corners, t_min=0.0, t_max=np.inf):
    """
    Möller-Trumbore test of one ray against all triangles.

    Returns:
        np.ndarray: ``(F,)`` hit distances, ``inf`` for misses.
    """
    edge1 = corners[:, 1] - corners[:, 0]
    edge2 = corners[:, 2] - corners[:, 0]

    p = np.cross(direction, edge2)
    determinant = _dot(edge1, p)
    parallel = np.abs(determinant) < 1e-300
    inverse = 1.0 / np.where(parallel, 1.0, determinant)

    s = origin - corners[:, 0]
    u = _dot(s, p) * inverse
    q = np.cross(s, edge1)
    v = (q @ direction) * inverse
    t = _dot(edge2, q) * inverse

    hit = (
        ~parallel & (u >= 0) & (v >= 0) & (u + v <= 1) &
        (t >= t_min) & (t <= t_max)
    )
    return np.where(hit, t, np.inf)


def nearest_hit(origin, direction, corners, t_min=0.0, t_max=np.inf):
    """
    Returns:
        tuple: ``(t, triangle)`` of the nearest hit, ``(inf, -1)`` for miss.
    """
    t = ray_triangles(origin, direction, corners, t_min, t_max)
    if not len(t) or not np.isfinite(t.min()):
        return np.inf, -1

    return t.min(), int(np.argmin(t))


def signed_distance(corners, points):
    """
    Distance of `points` to closed surface, negative inside.
    """
    distance = point_triangle_distance(points, corners).min(axis=1)
    return np.where(contains_points(corners, points), -distance, distance)


def spheres_clearance(spheres, corners):
    """
    Smallest gap between spheres ``(N, 4)`` and a closed surface, negative for
    penetration.
    """
    spheres = np.asarray(spheres, dtype=np.float64).reshape(-1, 4)
    return float(np.min(signed_distance(corners, spheres[:, :3]) -
                        spheres[:, 3]))


def dense_sphere_label(trajectory, robot, obstacles, poses=None):
    """
    Sphere model of `robot` checked at `poses` configurations evenly resampled
    along `trajectory`.

    Returns:
        tuple: ``(collides, margin)``, margin is the absolute clearance or
        penetration of the worst pose.
    """
    if poses is None:
        poses = settings.ORACLE_POSES

    configs = kinematics.resample_trajectory(trajectory, poses)
    spheres = kinematics.sphere_centers(
        kinematics.forward_kinematics_batch(configs, robot), robot
    ).reshape(-1, 4)

    clearance = np.inf
    for obstacle in obstacles:
        corners = obstacle.corners
        lower, upper = aabb(obstacle.vertices)
        near = np.all(
            (spheres[:, :3] + spheres[:, 3:] >= lower) &
            (spheres[:, :3] - spheres[:, 3:] <= upper),
            axis=1,
        )
        if near.any():
            clearance = min(clearance, spheres_clearance(spheres[near],
                                                         corners))
        else:
            gap = np.maximum(lower - spheres[:, :3], spheres[:, :3] - upper)
            gap = np.linalg.norm(np.maximum(gap, 0), axis=1) - spheres[:, 3]
            clearance = min(clearance, float(gap.min()))

    return clearance < 0, abs(clearance)


def chord_error(curves, dense_centers):
    """
    Largest distance of the densely sampled sphere paths from the curve paths.

    Args:
        curves (list): :class:`.SweptSphereCurve` per sphere.
        dense_centers (np.ndarray): ``(P, S, 3)`` sampled sphere centers.

    Returns:
        float: Bound on the path approximation error.
    """
    error = 0.0
    params = np.linspace(0.0, 1.0, settings.ORACLE_POSES + 1)
    for index, curve in enumerate(curves):
        path = evaluate_curve(curve, params)
        distance = point_segment_distance(
            dense_centers[:, index], path[:-1], path[1:]
        )
        error = max(error, float(distance.min(axis=1).max()))

    return error


def curve_hit(origin, direction, curve, segments=1024):
    """
    Dense capsule subdivision of `curve`: nearest entering hit distance of
    the ray, ``inf`` when the ray misses or starts inside the tube.
    """
    origin = np.asarray(origin, dtype=np.float64)
    direction = normalize(np.asarray(direction, dtype=np.float64))
    path = evaluate_curve(curve, np.linspace(0.0, 1.0, segments + 1))
    radius = curve.radius

    if point_segment_distance(origin, path[:-1], path[1:]).min() <= radius:
        return np.inf

    # sample the closest approach along the ray on a fine grid, then refine
    span = np.linalg.norm(path - origin, axis=1).max() + radius
    t = np.linspace(0.0, span, 4097)
    distance = point_segment_distance(
        origin + t[:, None] * direction, path[:-1], path[1:]
    ).min(axis=1)

    inside = np.nonzero(distance <= radius)[0]
    if not len(inside):
        return np.inf

    low, high = t[max(inside[0] - 1, 0)], t[inside[0]]
    for _ in range(60):
        middle = 0.5 * (low + high)
        gap = point_segment_distance(
            origin + middle * direction, path[:-1], path[1:]
        ).min()
        if gap <= radius:
            high = middle
        else:
            low = middle

    return high
