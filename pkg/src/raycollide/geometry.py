#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
"""
Small vectorized helpers for rigid transforms, boxes and distances shared by
the rest of the package.
"""
# Imports =====================================================================
import numpy as np
from scipy.spatial.transform import Rotation


# Functions & objects =========================================================
def normalize(vectors):
    """
    Normalize rows of `vectors`. Zero rows are left as they are.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    length = np.linalg.norm(vectors, axis=-1, keepdims=True)

    return vectors / np.where(length > 0, length, 1.0)


def make_transform(rotation=None, translation=None):
    """
    Args:
        rotation (np.ndarray, default None): ``(3, 3)`` rotation matrix.
        translation (np.ndarray, default None): ``(3,)`` translation.

    Returns:
        np.ndarray: ``(4, 4)`` homogeneous transform.
    """
    transform = np.eye(4)
    if rotation is not None:
        transform[:3, :3] = rotation
    if translation is not None:
        transform[:3, 3] = translation

    return transform


def rotation_matrix(axis, angle):
    """
    Rotation by `angle` radians about `axis`.
    """
    axis = normalize(axis)
    return Rotation.from_rotvec(axis * angle).as_matrix()


def rigid_inverse(transforms):
    """
    Invert rigid transforms without general matrix inversion.

    Args:
        transforms (np.ndarray): ``(..., 4, 4)`` rigid transforms.

    Returns:
        np.ndarray: Inverted transforms of the same shape.
    """
    transforms = np.asarray(transforms, dtype=np.float64)
    rot_t = np.swapaxes(transforms[..., :3, :3], -1, -2)

    inverse = np.zeros_like(transforms)
    inverse[..., :3, :3] = rot_t
    inverse[..., :3, 3] = -np.einsum("...ij,...j->...i", rot_t,
                                     transforms[..., :3, 3])
    inverse[..., 3, 3] = 1.0

    return inverse


def is_rigid(transform, tolerance=1e-6):
    transform = np.asarray(transform, dtype=np.float64)
    rot = transform[:3, :3]

    return (
        transform.shape == (4, 4) and
        np.allclose(rot @ rot.T, np.eye(3), atol=tolerance) and
        np.linalg.det(rot) > 0 and
        np.allclose(transform[3], [0, 0, 0, 1], atol=tolerance)
    )


def transform_points(transform, points):
    """
    Apply one ``(4, 4)`` transform to ``(N, 3)`` points.
    """
    points = np.asarray(points, dtype=np.float64)
    return points @ transform[:3, :3].T + transform[:3, 3]


def transform_vectors(transform, vectors):
    vectors = np.asarray(vectors, dtype=np.float64)
    return vectors @ transform[:3, :3].T


def aabb(points):
    """
    Returns:
        tuple: ``(lower, upper)`` corners of the axis aligned box.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    return points.min(axis=0), points.max(axis=0)


def transform_aabb(lower, upper, transform):
    """
    World AABB of a local box after rigid transformation (Arvo's method).
    """
    rot = transform[:3, :3]
    center = 0.5 * (lower + upper)
    half = 0.5 * (upper - lower)

    world_center = rot @ center + transform[:3, 3]
    world_half = np.abs(rot) @ half

    return world_center - world_half, world_center + world_half


def point_segment_distance(points, starts, ends):
    """
    Distance of every point to every segment.

    Args:
        points (np.ndarray): ``(N, 3)``
        starts (np.ndarray): ``(S, 3)``
        ends (np.ndarray): ``(S, 3)``

    Returns:
        np.ndarray: ``(N, S)`` distances.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    starts = np.asarray(starts, dtype=np.float64).reshape(-1, 3)
    ends = np.asarray(ends, dtype=np.float64).reshape(-1, 3)

    axis = ends - starts
    length2 = np.einsum("ij,ij->i", axis, axis)
    rel = points[:, None, :] - starts[None, :, :]

    s = np.einsum("nsj,sj->ns", rel, axis) / np.where(length2 > 0, length2, 1)
    s = np.clip(np.where(length2 > 0, s, 0.0), 0.0, 1.0)

    closest = starts[None] + s[..., None] * axis[None]
    return np.linalg.norm(points[:, None, :] - closest, axis=2)


def point_triangle_distance(points, corners):
    """
    Distance of every point to every triangle (Ericson's closest point
    regions, vectorized).

    Args:
        points (np.ndarray): ``(N, 3)``
        corners (np.ndarray): ``(F, 3, 3)`` triangle corners.

    Returns:
        np.ndarray: ``(N, F)`` distances.
    """
    p = np.asarray(points, dtype=np.float64).reshape(-1, 1, 3)
    a = corners[None, :, 0]
    b = corners[None, :, 1]
    c = corners[None, :, 2]

    ab = b - a
    ac = c - a
    normal = np.cross(ab, ac)
    n2 = np.einsum("...j,...j->...", normal, normal)

    # projection inside the triangle
    ap = p - a
    inv = 1.0 / np.where(n2 > 0, n2, 1.0)
    v = np.einsum("...j,...j->...", np.cross(ap, ac), normal) * inv
    w = np.einsum("...j,...j->...", np.cross(ab, ap), normal) * inv
    inside = (v >= 0) & (w >= 0) & (v + w <= 1) & (n2 > 0)
    plane = np.abs(np.einsum("...j,...j->...", ap, normal)) * np.sqrt(inv)

    edges = np.minimum(
        np.minimum(
            _segment_distance(p, a, b),
            _segment_distance(p, b, c),
        ),
        _segment_distance(p, c, a),
    )

    return np.where(inside, plane, edges)


def _segment_distance(p, a, b):
    axis = b - a
    length2 = np.einsum("...j,...j->...", axis, axis)
    s = np.einsum("...j,...j->...", p - a, axis) / \
        np.where(length2 > 0, length2, 1.0)
    s = np.clip(s, 0.0, 1.0)

    return np.linalg.norm(p - (a + s[..., None] * axis), axis=-1)
