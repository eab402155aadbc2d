#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Software ray tracing engine.

Single level
============

Rays are traced against one :class:`.Bvh` by :func:`trace_bvh` (all hits on
triangles) or :func:`trace_capsules` (entering hits on swept sphere capsules).

Two level
=========

:func:`build_scene_index` places shared BVHs at rigid poses. Each instance
carries :class:`InstanceTag`, queries take optional `filter`, which is either
a predicate called with the tag, or a bool mask over the instances::

    scene = build_scene_index([
        (obstacle_bvh, np.eye(4), InstanceTag.obstacle_tag(0)),
        (link_bvh, pose, InstanceTag.robot_tag(config=0, link=3)),
    ])
    hit = intersect_any(scene, ray, filter=lambda tag: tag.is_robot)

Degenerate hits
===============

Hit closer than :attr:`~raycollide.settings.DEGENERATE_EPSILON` to a triangle
boundary or to the segment end makes the ray (per instance) to be traced
once more, with direction rotated by :attr:`~raycollide.settings.JITTER_ANGLE`.
The rotation axis depends only on the direction, so the result of a ray
doesn't depend on the rest of the batch.

There is also defined exception tree - see :class:`RayTracingException`
doc-string for details.
"""
import math
import logging
from collections import namedtuple

import numpy as np
from scipy.interpolate import BSpline

from . import settings
from .bvh import Boxes
from .bvh import Capsules
from .bvh import build_bvh
from .bvh import candidate_pairs
from .bvh import safe_inverse
from .bvh import slab_hits
from .geometry import is_rigid
from .geometry import normalize
from .geometry import transform_aabb
from .geometry import rigid_inverse
from .datastructures import Hit
from .datastructures import HitSet
from .datastructures import RayBatch
from .datastructures import FaceSide
from .datastructures import CurveKind


# Variables ===================================================================
logger = logging.getLogger(__name__)


# Functions & objects =========================================================
class RayTracingException(Exception):
    """
    Exception tree::

        - RayTracingException
          |- EmptyGeometryException
          `- InvalidRayException
    """
    def __init__(self, message):
        Exception.__init__(self, message)


class EmptyGeometryException(RayTracingException):
    def __init__(self, message):
        super(EmptyGeometryException, self).__init__(message)


class InvalidRayException(RayTracingException):
    def __init__(self, message):
        super(InvalidRayException, self).__init__(message)


class InstanceTag(namedtuple("InstanceTag", ["kind",
                                             "config",
                                             "link",
                                             "obstacle"])):
    """
    Collision pair tag of an instance.

    Attributes:
        kind (str): :attr:`OBSTACLE` or :attr:`ROBOT`.
        config (int): Configuration index of robot links, ``-1`` otherwise.
        link (int): Link index of robot links, ``-1`` otherwise.
        obstacle (int): Obstacle index, ``-1`` for robot links.
    """
    OBSTACLE = "obstacle"
    ROBOT = "robot"

    @staticmethod
    def obstacle_tag(obstacle):
        return InstanceTag(InstanceTag.OBSTACLE, -1, -1, obstacle)

    @staticmethod
    def robot_tag(config, link):
        return InstanceTag(InstanceTag.ROBOT, config, link, -1)

    @property
    def is_robot(self):
        return self.kind == InstanceTag.ROBOT

    @property
    def is_obstacle(self):
        return self.kind == InstanceTag.OBSTACLE


class Instance(namedtuple("Instance", ["bvh",
                                       "transform",
                                       "instance_id",
                                       "tag"])):
    """
    Posed reference to a shared :class:`.Bvh`.

    Attributes:
        bvh (obj): Bottom level :class:`.Bvh`, not copied.
        transform (np.ndarray): ``(4, 4)`` local -> world rigid transform.
        instance_id (int): Index of the instance in the scene.
        tag (obj): :class:`InstanceTag`.
    """
    pass


class SceneIndex(namedtuple("SceneIndex", ["instances",
                                           "top",
                                           "inverse",
                                           "groups"])):
    """
    Two level acceleration structure.

    Attributes:
        instances (tuple): :class:`Instance` structures.
        top (obj): :class:`.Bvh` over world AABBs of the instances, None for
            empty scene.
        inverse (np.ndarray): ``(I, 4, 4)`` world -> local transforms.
        groups (list): Lists of instance indices sharing one bottom level BVH.
    """
    @property
    def size(self):
        return len(self.instances)

    @property
    def world_bounds(self):
        """
        Returns:
            tuple: ``(lower, upper)`` enclosing all instances, None for empty
            scene.
        """
        if self.top is None:
            return None

        return self.top.lower[0], self.top.upper[0]

    @property
    def tags(self):
        return [instance.tag for instance in self.instances]


def check_rays(rays):
    """
    Raises:
        InvalidRayException: For non-unit directions or bad ``t`` bounds.
    """
    norms = np.linalg.norm(rays.directions, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise InvalidRayException("Ray direction has to be unit vector.")

    if np.any(rays.t_min < 0) or np.any(rays.t_min > rays.t_max):
        raise InvalidRayException("Ray bounds have to be 0 <= t_min <= t_max.")


def _jitter_axis():
    axis = np.random.RandomState(settings.JITTER_SEED).normal(size=3)
    return axis / np.linalg.norm(axis)


def jitter_directions(directions, angle=None):
    """
    Rotate every direction by `angle` about an axis perpendicular to it. The
    axis is computed from the direction and fixed reference axis only.
    """
    if angle is None:
        angle = settings.JITTER_ANGLE

    directions = np.asarray(directions, dtype=np.float64).reshape(-1, 3)
    reference = _jitter_axis()

    axes = np.cross(directions, reference)
    parallel = np.linalg.norm(axes, axis=1) < 1e-3
    axes[parallel] = np.cross(directions[parallel], reference[[1, 2, 0]])
    axes = normalize(axes)

    # Rodrigues, axis perpendicular to direction
    rotated = directions * math.cos(angle) + \
        np.cross(axes, directions) * math.sin(angle)

    return normalize(rotated)


def intersect_triangles(origins, directions, t_min, t_max, corners):
    """
    Watertight ray / triangle test of aligned arrays (one triangle per ray).

    Args:
        origins (np.ndarray): ``(N, 3)``
        directions (np.ndarray): ``(N, 3)``
        t_min (np.ndarray): ``(N,)``
        t_max (np.ndarray): ``(N,)``
        corners (np.ndarray): ``(N, 3, 3)``

    Returns:
        tuple: ``(hit, t, front, degenerate)`` arrays. `front` is True when \
               the ray goes against the triangle normal. `degenerate` marks \
               hits near triangle boundary or segment ends.
    """
    n = len(origins)
    rows = np.arange(n)

    kz = np.argmax(np.abs(directions), axis=1)
    kx = (kz + 1) % 3
    ky = (kx + 1) % 3
    flip = directions[rows, kz] < 0
    kx, ky = np.where(flip, ky, kx), np.where(flip, kx, ky)

    dz = directions[rows, kz]
    sx = directions[rows, kx] / dz
    sy = directions[rows, ky] / dz
    sz = 1.0 / dz

    def project(vertex):
        rel = vertex - origins
        rz = rel[rows, kz]
        return rel[rows, kx] - sx * rz, rel[rows, ky] - sy * rz, sz * rz

    ax, ay, az = project(corners[:, 0])
    bx, by, bz = project(corners[:, 1])
    cx, cy, cz = project(corners[:, 2])

    u = cx * by - cy * bx
    v = ax * cy - ay * cx
    w = bx * ay - by * ax

    negative = (u < 0) | (v < 0) | (w < 0)
    positive = (u > 0) | (v > 0) | (w > 0)
    det = u + v + w

    inside = ~(negative & positive) & (det != 0)
    safe_det = np.where(det != 0, det, 1.0)
    t = (u * az + v * bz + w * cz) / safe_det

    hit = inside & (t >= t_min) & (t <= t_max)

    normals = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    front = np.einsum("ij,ij->i", directions, normals) < 0

    eps = settings.DEGENERATE_EPSILON
    barycentric = np.stack([u, v, w], axis=1) / safe_det[:, None]
    degenerate = hit & (
        (barycentric.min(axis=1) < eps) |
        (t - t_min < eps) |
        (np.isfinite(t_max) & (t_max - t < eps))
    )

    return hit, t, front, degenerate


def _trace_triangles_once(bvh, origins, directions, t_min, t_max):
    corners = bvh.primitives.corners
    result_rays = []
    result_prims = []
    result_t = []
    result_front = []
    result_degenerate = []

    for begin in range(0, len(origins), settings.RAY_CHUNK):
        chunk = slice(begin, begin + settings.RAY_CHUNK)
        ray, prim = candidate_pairs(
            bvh,
            origins[chunk],
            directions[chunk],
            t_min[chunk],
            t_max[chunk],
        )
        ray = ray + begin
        hit, t, front, degenerate = intersect_triangles(
            origins[ray],
            directions[ray],
            t_min[ray],
            t_max[ray],
            corners[prim],
        )

        result_rays.append(ray[hit])
        result_prims.append(prim[hit])
        result_t.append(t[hit])
        result_front.append(front[hit])
        result_degenerate.append(degenerate[hit])

    if not result_rays:
        return HitSet.empty(), np.zeros(0, dtype=bool)

    hits = HitSet(
        ray=np.concatenate(result_rays),
        instance=np.full(sum(len(r) for r in result_rays), -1, dtype=np.int64),
        primitive=np.concatenate(result_prims),
        t=np.concatenate(result_t),
        front=np.concatenate(result_front),
    )

    return hits, np.concatenate(result_degenerate)


def _trace_local(bvh, origins, directions, t_min, t_max, jitter=True):
    """
    All triangle hits of rays in the frame of `bvh`, with one jittered
    re-trace of rays with degenerate hits.
    """
    hits, degenerate = _trace_triangles_once(
        bvh, origins, directions, t_min, t_max
    )
    if not jitter or not degenerate.any():
        return hits

    retrace = np.unique(hits.ray[degenerate])
    logger.debug("Re-tracing %d rays with degenerate hits", len(retrace))

    again, _ = _trace_triangles_once(
        bvh,
        origins[retrace],
        jitter_directions(directions[retrace]),
        t_min[retrace],
        t_max[retrace],
    )
    again = again._replace(ray=retrace[again.ray])

    keep = ~np.isin(hits.ray, retrace)
    return HitSet.concatenate([hits.take(keep), again])


def trace_bvh(bvh, rays, jitter=True):
    """
    All hits of `rays` with the triangles of one :class:`.Bvh`.

    Args:
        bvh (obj): Triangle :class:`.Bvh`.
        rays (obj): :class:`.RayBatch`.
        jitter (bool, default True): Re-trace rays with degenerate hits.

    Returns:
        obj: :class:`.HitSet` with ``instance = -1``.
    """
    check_rays(rays)
    return _trace_local(
        bvh, rays.origins, rays.directions, rays.t_min, rays.t_max, jitter
    )


def build_scene_index(instances):
    """
    Build two level index.

    Args:
        instances (list): ``(bvh, transform, tag)`` triples. The same `bvh`
                  object may be used by any number of instances, it is never
                  copied.

    Returns:
        obj: :class:`SceneIndex`.

    Raises:
        ValueError: If any transform is not rigid.
    """
    posed = []
    groups = {}
    lower = []
    upper = []
    for index, (bvh, transform, tag) in enumerate(instances):
        transform = np.asarray(transform, dtype=np.float64)
        if not is_rigid(transform):
            raise ValueError("Transform of instance %d is not rigid." % index)

        posed.append(Instance(bvh, transform, index, tag))
        groups.setdefault(id(bvh), []).append(index)

        box_lower, box_upper = transform_aabb(bvh.lower[0], bvh.upper[0],
                                              transform)
        lower.append(box_lower)
        upper.append(box_upper)

    top = None
    inverse = np.zeros((0, 4, 4))
    if posed:
        top = build_bvh(Boxes(np.array(lower), np.array(upper)))
        inverse = rigid_inverse(np.stack([p.transform for p in posed]))

    return SceneIndex(
        instances=tuple(posed),
        top=top,
        inverse=inverse,
        groups=list(groups.values()),
    )


def filter_mask(scene, filter=None):
    """
    Convert `filter` to bool mask over the instances of `scene`.

    Args:
        scene (obj): :class:`SceneIndex`.
        filter (callable / np.ndarray / None): Predicate called with
               :class:`InstanceTag`, bool mask, or None for all instances.
    """
    if filter is None:
        return np.ones(scene.size, dtype=bool)

    if callable(filter):
        return np.array([bool(filter(tag)) for tag in scene.tags], dtype=bool)

    mask = np.asarray(filter, dtype=bool)
    if mask.shape != (scene.size,):
        raise ValueError("Filter mask doesn't match number of instances.")

    return mask


def instance_pairs(scene, rays, mask):
    """
    ``(ray, instance)`` pairs whose world AABB is crossed by the ray.
    """
    if scene.top is None or not mask.any():
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty

    ray, instance = candidate_pairs(
        scene.top, rays.origins, rays.directions, rays.t_min, rays.t_max
    )
    keep = mask[instance]
    ray, instance = ray[keep], instance[keep]

    boxes = scene.top.primitives
    crossing = slab_hits(
        boxes.lower[instance],
        boxes.upper[instance],
        rays.origins[ray],
        safe_inverse(rays.directions[ray]),
        rays.t_min[ray],
        rays.t_max[ray],
    )

    return ray[crossing], instance[crossing]


def trace_instances(scene, rays, filter=None, jitter=True):
    """
    All hits of `rays` with instances selected by `filter`.

    Rays hitting instances of one shared BVH are transformed to the local
    frames and traced together.

    Args:
        scene (obj): :class:`SceneIndex`.
        rays (obj): :class:`.RayBatch`.
        filter (callable / np.ndarray, default None): See :func:`filter_mask`.
        jitter (bool, default True): Re-trace degenerate hits.

    Returns:
        obj: :class:`.HitSet`, ``instance`` is the index into
        :attr:`SceneIndex.instances`.
    """
    check_rays(rays)
    mask = filter_mask(scene, filter)

    found = []
    for begin in range(0, rays.size, settings.RAY_CHUNK):
        chunk = rays.take(slice(begin, begin + settings.RAY_CHUNK))
        ray, instance = instance_pairs(scene, chunk, mask)
        if not ray.size:
            continue

        for group in scene.groups:
            selected = np.isin(instance, group)
            if not selected.any():
                continue

            pair_ray = ray[selected]
            pair_instance = instance[selected]
            inverse = scene.inverse[pair_instance]

            origins = np.einsum(
                "nij,nj->ni", inverse[:, :3, :3], chunk.origins[pair_ray]
            ) + inverse[:, :3, 3]
            directions = np.einsum(
                "nij,nj->ni", inverse[:, :3, :3], chunk.directions[pair_ray]
            )

            hits = _trace_local(
                scene.instances[group[0]].bvh,
                origins,
                normalize(directions),
                chunk.t_min[pair_ray],
                chunk.t_max[pair_ray],
                jitter,
            )
            found.append(hits._replace(
                ray=pair_ray[hits.ray] + begin,
                instance=pair_instance[hits.ray],
            ))

    return HitSet.concatenate(found)


def intersect_any_batch(scene, rays, filter=None):
    """
    Returns:
        np.ndarray: ``(N,)`` bool, True for rays hitting anything selected by
        `filter`.
    """
    hits = trace_instances(scene, rays, filter)
    result = np.zeros(rays.size, dtype=bool)
    result[hits.ray] = True

    return result


def _to_hit(hits, index):
    return Hit(
        t=float(hits.t[index]),
        primitive_id=int(hits.primitive[index]),
        instance_id=int(hits.instance[index]),
        face_side=FaceSide.FRONT if hits.front[index] else FaceSide.BACK,
    )


def intersect_any(scene, ray, filter=None):
    """
    Any hit query of one :class:`.Ray`.

    Returns:
        obj: :class:`.Hit` (the nearest one, so the answer is reproducible) \
             or None.
    """
    hits = trace_instances(scene, RayBatch.from_rays([ray]), filter)
    if not hits.size:
        return None

    return _to_hit(hits, int(np.lexsort((hits.instance, hits.t))[0]))


def count_faces_batch(scene, rays, filter=None):
    """
    Count front and back face hits of every ray per instance.

    Returns:
        tuple: ``(ray, instance, front, back)`` arrays, one row per hit \
               ``(ray, instance)`` pair, sorted.
    """
    hits = trace_instances(scene, rays, filter)
    if not hits.size:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty, empty

    pairs, inverse = np.unique(
        np.column_stack([hits.ray, hits.instance]),
        axis=0,
        return_inverse=True,
    )
    inverse = inverse.reshape(-1)
    front = np.bincount(inverse, weights=hits.front, minlength=len(pairs))
    back = np.bincount(inverse, weights=~hits.front, minlength=len(pairs))

    return (
        pairs[:, 0],
        pairs[:, 1],
        front.astype(np.int64),
        back.astype(np.int64),
    )


def count_faces(scene, ray, filter=None):
    """
    Count hits of one ray by face side.

    Returns:
        dict: ``instance_id -> (front_count, back_count)`` of instances hit \
              by the ray.
    """
    _, instance, front, back = count_faces_batch(
        scene, RayBatch.from_rays([ray]), filter
    )

    return {
        int(i): (int(f), int(b))
        for i, f, b in zip(instance, front, back)
    }


def inside_mask(scene, rays, filter=None):
    """
    Containment test by face parity: ``(N, I)`` bool, True where the ray
    hits more back faces than front faces of the instance.
    """
    ray, instance, front, back = count_faces_batch(scene, rays, filter)
    result = np.zeros((rays.size, scene.size), dtype=bool)
    inside = back > front
    result[ray[inside], instance[inside]] = True

    return result


# Curves ======================================================================
def intersect_capsules(origins, directions, t_min, t_max, starts, ends, radii):
    """
    Entering intersection of rays with capsules (aligned arrays). Rays
    starting inside the capsule don't hit it.

    Returns:
        tuple: ``(hit, t)`` arrays.
    """
    axis = ends - starts
    length = np.linalg.norm(axis, axis=1)
    unit = axis / np.where(length > 0, length, 1.0)[:, None]
    r2 = radii ** 2

    # closest point of the origin on the axis segment
    rel = origins - starts
    s = np.clip(np.einsum("ij,ij->i", rel, unit), 0.0, length)
    closest = starts + s[:, None] * unit
    outside = np.einsum("ij,ij->i", origins - closest, origins - closest) > r2

    entry = np.full(len(origins), np.inf)

    # cylinder body
    d_dot = np.einsum("ij,ij->i", directions, unit)
    w_dot = np.einsum("ij,ij->i", rel, unit)
    dp = directions - d_dot[:, None] * unit
    wp = rel - w_dot[:, None] * unit
    a = np.einsum("ij,ij->i", dp, dp)
    b = 2.0 * np.einsum("ij,ij->i", dp, wp)
    c = np.einsum("ij,ij->i", wp, wp) - r2
    disc = b * b - 4 * a * c

    body = (length > 0) & (a > 1e-300) & (disc >= 0)
    with np.errstate(invalid="ignore", divide="ignore"):
        t_body = (-b - np.sqrt(np.maximum(disc, 0))) / (2 * np.where(body, a, 1))
    along = w_dot + t_body * d_dot
    body &= (along >= 0) & (along <= length) & (t_body >= t_min)
    entry = np.where(body, t_body, entry)

    # end spheres
    for center in (starts, ends):
        w = origins - center
        half_b = np.einsum("ij,ij->i", w, directions)
        c = np.einsum("ij,ij->i", w, w) - r2
        disc = half_b * half_b - c
        t_sphere = -half_b - np.sqrt(np.maximum(disc, 0))
        valid = (disc >= 0) & (t_sphere >= t_min)
        entry = np.where(valid & (t_sphere < entry), t_sphere, entry)

    hit = outside & np.isfinite(entry) & (entry <= t_max)
    return hit, entry


def curve_segments(curve, tolerance=None):
    """
    Polyline approximation of the curve path.

    Piecewise linear curves return their control polygon. Splines are
    flattened per knot span into ``k = ceil(h * sqrt(M / (8 * tolerance)))``
    equal parameter steps, where `h` is the span length and `M` bounds the
    second derivative on the span, so the chord deviation stays under
    `tolerance`.

    Args:
        curve (obj): :class:`.SweptSphereCurve`.
        tolerance (float, default None): Deviation bound,
                  :attr:`~raycollide.settings.FLATTEN_TOLERANCE` by default.

    Returns:
        tuple: ``(starts, ends)`` arrays of segment end points.
    """
    points = curve.control_points
    if curve.kind == CurveKind.PIECEWISE_LINEAR:
        if len(points) == 1:
            return points, points

        return points[:-1], points[1:]

    if tolerance is None:
        tolerance = settings.FLATTEN_TOLERANCE

    spline = BSpline(curve.knots, points, curve.degree, extrapolate=False)
    second = spline.derivative(2)

    knots = np.unique(curve.knots[curve.degree:len(curve.knots) - curve.degree])
    samples = [knots[:1]]
    for low, high in zip(knots[:-1], knots[1:]):
        span = high - low
        inner = low + span * np.array([1e-9, 0.5, 1 - 1e-9])
        bound = np.linalg.norm(second(inner), axis=1).max()

        pieces = int(math.ceil(span * math.sqrt(bound / (8 * tolerance))))
        pieces = min(max(pieces, 1), settings.FLATTEN_MAX_PIECES)
        samples.append(np.linspace(low, high, pieces + 1)[1:])

    params = np.concatenate(samples)
    params[-1] = knots[-1] - 1e-12 * (knots[-1] - knots[0])
    path = spline(params)
    path[0] = points[0]
    path[-1] = points[-1]

    return path[:-1], path[1:]


def curve_capsules(curves, tolerance=None):
    """
    Flatten list of curves to one :class:`.Capsules` container.
    """
    starts, ends, radii, owner = [], [], [], []
    for index, curve in enumerate(curves):
        s, e = curve_segments(curve, tolerance)
        starts.append(s)
        ends.append(e)
        radii.append(np.full(len(s), curve.radius))
        owner.append(np.full(len(s), index, dtype=np.int64))

    if not starts:
        raise EmptyGeometryException("No curves given.")

    return Capsules(
        np.concatenate(starts),
        np.concatenate(ends),
        np.concatenate(radii),
        np.concatenate(owner),
    )


def trace_capsules(bvh, rays):
    """
    Entering hits of `rays` with capsule :class:`.Bvh`.

    Returns:
        tuple: ``(ray, capsule, t)`` arrays.
    """
    check_rays(rays)
    capsules = bvh.primitives

    found_rays, found_caps, found_t = [], [], []
    for begin in range(0, rays.size, settings.RAY_CHUNK):
        chunk = rays.take(slice(begin, begin + settings.RAY_CHUNK))
        ray, cap = candidate_pairs(
            bvh, chunk.origins, chunk.directions, chunk.t_min, chunk.t_max
        )
        hit, t = intersect_capsules(
            chunk.origins[ray],
            chunk.directions[ray],
            chunk.t_min[ray],
            chunk.t_max[ray],
            capsules.starts[cap],
            capsules.ends[cap],
            capsules.radii[cap],
        )
        found_rays.append(ray[hit] + begin)
        found_caps.append(cap[hit])
        found_t.append(t[hit])

    if not found_rays:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)

    return (
        np.concatenate(found_rays),
        np.concatenate(found_caps),
        np.concatenate(found_t),
    )


def intersect_curve(ray, curve, tolerance=None):
    """
    Entering hit of one ray with swept sphere curve. Back face hits (ray
    leaving the tube) are not reported.

    Returns:
        obj: :class:`.Hit` with the nearest entering point, or None.
    """
    starts, ends = curve_segments(curve, tolerance)
    count = len(starts)

    hit, t = intersect_capsules(
        np.repeat(ray.origin[None], count, axis=0),
        np.repeat(ray.direction[None], count, axis=0),
        np.full(count, ray.t_min),
        np.full(count, ray.t_max),
        starts,
        ends,
        np.full(count, curve.radius),
    )

    # ray starting inside any capsule of the tube never enters it
    inside = np.any(
        np.linalg.norm(
            ray.origin - _closest_on_segments(ray.origin, starts, ends),
            axis=1
        ) <= curve.radius
    )
    if inside or not hit.any():
        return None

    index = int(np.argmin(np.where(hit, t, np.inf)))
    return Hit(
        t=float(t[index]),
        primitive_id=index,
        instance_id=-1,
        face_side=None,
    )


def _closest_on_segments(point, starts, ends):
    axis = ends - starts
    length2 = np.einsum("ij,ij->i", axis, axis)
    s = np.einsum("ij,ij->i", point - starts, axis) / \
        np.where(length2 > 0, length2, 1.0)

    return starts + np.clip(s, 0, 1)[:, None] * axis


def scene_bounds(scene):
    """
    Returns:
        tuple: ``(lower, upper)`` of the whole scene.

    Raises:
        EmptyGeometryException: For empty scene.
    """
    if scene.top is None:
        raise EmptyGeometryException("Scene index doesn't contain instances.")

    return scene.world_bounds

