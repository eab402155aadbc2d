#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Robot model, batched forward kinematics and configuration sampling.

Robot model document
====================

Robot is described by JSON document with ordered list of links. Parent has to
precede its children, mesh paths are relative to the document::

    {
        "name": "arm",
        "links": [
            {"name": "base", "mesh": "base.stl", "parent": null,
             "spheres": [[0, 0, 0.05, 0.08]]},
            {"name": "upper", "mesh": "upper.stl", "parent": "base",
             "joint": {"name": "j1", "type": "revolute", "axis": [0, 0, 1],
                       "origin": {"xyz": [0, 0, 0.1], "rpy": [0, 0, 0]},
                       "limits": [-2.9, 2.9]},
             "spheres": [[0, 0, 0.1, 0.06], [0, 0, 0.2, 0.06]]}
        ]
    }

Lengths are in meters, angles in radians. ``origin`` may also be given as
4x4 matrix.

Trajectory document
===================

Trajectories are stored as ``{"trajectories": [[q_0, q_1, ..], ..]}``.

There is also defined exception tree - see :class:`KinematicsException`
doc-string for details.
"""
import os.path
import json
import logging

import numpy as np
from scipy.stats import qmc
from scipy.spatial.transform import Rotation

from . import mesh as mesh_module
from .geometry import make_transform
from .datastructures import Joint
from .datastructures import Link
from .datastructures import ObbBatch
from .datastructures import JointType
from .datastructures import PoseBatch
from .datastructures import RobotModel


# Variables ===================================================================
logger = logging.getLogger(__name__)

#: Slack of the joint limit check.
_LIMIT_TOLERANCE = 1e-12


# Functions & objects =========================================================
class KinematicsException(Exception):
    """
    Exception tree::

        - KinematicsException
          |- RobotModelException
          `- JointLimitException
    """
    def __init__(self, message):
        Exception.__init__(self, message)


class RobotModelException(KinematicsException):
    def __init__(self, message):
        super(RobotModelException, self).__init__(message)


class JointLimitException(KinematicsException):
    """
    Attributes:
        config_index (int): Index of the offending configuration.
        joint (str): Name of the joint.
    """
    def __init__(self, message, config_index, joint):
        super(JointLimitException, self).__init__(message)
        self.config_index = config_index
        self.joint = joint


def make_link(name, mesh, parent=-1, joint=None, spheres=()):
    """
    Create :class:`.Link` with precomputed OBB.

    Args:
        name (str): Link name.
        mesh (obj): :class:`.TriangleMesh` in the link frame.
        parent (int, default -1): Index of the parent link.
        joint (obj, default None): :class:`.Joint`, fixed joint by default.
        spheres (list, default ()): ``[x, y, z, r]`` spheres.
    """
    if joint is None:
        joint = Joint(name + "_fixed")

    spheres = np.array(spheres, dtype=np.float64).reshape(-1, 4)
    if np.any(spheres[:, 3] <= 0):
        raise RobotModelException("Sphere radii of `%s` must be positive." % name)

    return Link(
        name=name,
        mesh=mesh,
        obb=mesh_module.compute_obb(mesh),
        spheres=spheres,
        parent=int(parent),
        joint=joint,
    )


def make_robot(name, links):
    """
    Validate link list and create :class:`.RobotModel`.

    Raises:
        RobotModelException: If parent doesn't precede its child, or limits
                             are inverted.
    """
    links = tuple(links)
    if not links:
        raise RobotModelException("Robot `%s` has no links." % name)

    for index, link in enumerate(links):
        if link.parent >= index:
            raise RobotModelException(
                "Parent of link `%s` has to precede it." % link.name
            )
        if index > 0 and link.parent < 0:
            raise RobotModelException(
                "Only the first link can be the root (`%s`)." % link.name
            )
        if link.joint.lower > link.joint.upper:
            raise RobotModelException(
                "Joint `%s` has lower limit over the upper." % link.joint.name
            )
        if link.joint.type not in (JointType.REVOLUTE, JointType.PRISMATIC,
                                   JointType.FIXED):
            raise RobotModelException(
                "Unknown joint type `%s`." % link.joint.type
            )

    return RobotModel(name=name, links=links)


def _parse_origin(origin):
    if origin is None:
        return np.eye(4)

    if isinstance(origin, dict):
        rotation = Rotation.from_euler(
            "xyz", origin.get("rpy", [0, 0, 0])
        ).as_matrix()
        return make_transform(rotation, origin.get("xyz", [0, 0, 0]))

    matrix = np.array(origin, dtype=np.float64)
    if matrix.shape != (4, 4):
        raise RobotModelException("Joint origin has to be 4x4 matrix.")

    return matrix


def robot_from_dict(document, base_path="."):
    """
    Build :class:`.RobotModel` from parsed robot document.
    """
    try:
        names = {}
        links = []
        for index, item in enumerate(document["links"]):
            parent = item.get("parent")
            if parent is not None and parent not in names:
                raise RobotModelException(
                    "Unknown (or later defined) parent `%s`." % parent
                )

            joint_doc = item.get("joint") or {}
            limits = joint_doc.get("limits", [0.0, 0.0])
            joint = Joint(
                name=joint_doc.get("name", item["name"] + "_joint"),
                type=joint_doc.get("type", JointType.FIXED),
                axis=joint_doc.get("axis", [0, 0, 1]),
                origin=_parse_origin(joint_doc.get("origin")),
                lower=limits[0],
                upper=limits[1],
            )

            mesh = mesh_module.load_mesh(
                os.path.join(base_path, item["mesh"])
            )
            links.append(make_link(
                name=item["name"],
                mesh=mesh,
                parent=-1 if parent is None else names[parent],
                joint=joint,
                spheres=item.get("spheres", []),
            ))
            names[item["name"]] = index
    except (KeyError, TypeError, IndexError) as e:
        raise RobotModelException("Invalid robot document: %r" % e) from e

    return make_robot(document.get("name", "robot"), links)


def load_robot(path):
    """
    Load robot model document.

    Args:
        path (str): Path to the JSON document.

    Returns:
        obj: :class:`.RobotModel`.

    Raises:
        RobotModelException: If the document is missing or invalid.
    """
    try:
        with open(path) as f:
            document = json.load(f)
    except (OSError, ValueError) as e:
        raise RobotModelException("Can't read robot `%s`: %s" % (path, e)) from e

    robot = robot_from_dict(document, os.path.dirname(os.path.abspath(path)))
    logger.info(
        "Loaded robot `%s`: %d links, %d dof, %d spheres",
        robot.name,
        len(robot.links),
        robot.dof,
        robot.sphere_count,
    )

    return robot


def check_limits(configs, robot):
    """
    Raises:
        JointLimitException: For the first configuration out of limits.
    """
    configs = np.asarray(configs, dtype=np.float64)
    if configs.ndim != 2 or configs.shape[1] != robot.dof:
        raise KinematicsException(
            "Configurations have to be (K, %d) array, not %r." % (
                robot.dof,
                configs.shape,
            )
        )

    below = configs < robot.lower - _LIMIT_TOLERANCE
    above = configs > robot.upper + _LIMIT_TOLERANCE
    bad = below | above | ~np.isfinite(configs)
    if bad.any():
        config, joint = np.argwhere(bad)[0]
        name = robot.joint_names[joint]
        raise JointLimitException(
            "Configuration %d violates limits of joint `%s` (%r not in "
            "[%r, %r])." % (
                config,
                name,
                configs[config, joint],
                robot.lower[joint],
                robot.upper[joint],
            ),
            int(config),
            name,
        )


def compose(a, b):
    """
    Product of stacked 4x4 (or 3x3) matrices, written term by term so the
    result of every item doesn't depend on the stack size.
    """
    size = a.shape[-1]
    result = a[..., :, 0, None] * b[..., None, 0, :]
    for k in range(1, size):
        result = result + a[..., :, k, None] * b[..., None, k, :]

    return result


def joint_transforms(joint, values):
    """
    Joint motion transforms for a vector of joint values.

    Returns:
        np.ndarray: ``(K, 4, 4)``
    """
    values = np.asarray(values, dtype=np.float64)
    count = len(values)
    motion = np.zeros((count, 4, 4))
    motion[:, 3, 3] = 1.0

    x, y, z = joint.axis
    if joint.type == JointType.REVOLUTE:
        cos = np.cos(values)
        sin = np.sin(values)
        one = 1.0 - cos

        motion[:, 0, 0] = cos + x * x * one
        motion[:, 0, 1] = x * y * one - z * sin
        motion[:, 0, 2] = x * z * one + y * sin
        motion[:, 1, 0] = y * x * one + z * sin
        motion[:, 1, 1] = cos + y * y * one
        motion[:, 1, 2] = y * z * one - x * sin
        motion[:, 2, 0] = z * x * one - y * sin
        motion[:, 2, 1] = z * y * one + x * sin
        motion[:, 2, 2] = cos + z * z * one
    else:
        motion[:, 0, 0] = motion[:, 1, 1] = motion[:, 2, 2] = 1.0
        if joint.type == JointType.PRISMATIC:
            motion[:, :3, 3] = values[:, None] * joint.axis

    return compose(np.broadcast_to(joint.origin, motion.shape), motion)


def forward_kinematics_batch(configs, robot, check=True):
    """
    World transforms of all links for a batch of configurations.

    Args:
        configs (np.ndarray): ``(K, dof)`` joint values.
        robot (obj): :class:`.RobotModel`.
        check (bool, default True): Check joint limits.

    Returns:
        obj: :class:`.PoseBatch` with ``(K, L, 4, 4)`` transforms.

    Raises:
        JointLimitException: If any configuration is out of limits.
    """
    configs = np.asarray(configs, dtype=np.float64)
    if configs.ndim == 1:
        configs = configs[None]

    if check:
        check_limits(configs, robot)

    count = len(configs)
    transforms = np.zeros((count, len(robot.links), 4, 4))

    column = 0
    for index, link in enumerate(robot.links):
        if link.joint.actuated:
            values = configs[:, column]
            column += 1
        else:
            values = np.zeros(count)

        local = joint_transforms(link.joint, values)
        if link.parent < 0:
            transforms[:, index] = local
        else:
            transforms[:, index] = compose(transforms[:, link.parent], local)

    return PoseBatch(transforms)


def transform_robot_obbs(poses, robot):
    """
    Link OBBs posed by `poses`.

    Returns:
        obj: :class:`.ObbBatch` of shape ``(K, L)``.
    """
    centers = np.stack([link.obb.center for link in robot.links])
    rotations = np.stack([link.obb.rotation for link in robot.links])
    half = np.stack([link.obb.half_extents for link in robot.links])

    rot = poses.transforms[..., :3, :3]
    return ObbBatch(
        centers=np.einsum("klij,lj->kli", rot, centers) +
        poses.transforms[..., :3, 3],
        rotations=compose(rot, np.broadcast_to(rotations, rot.shape)),
        half_extents=np.broadcast_to(half, rot.shape[:-1]).copy(),
    )


def sphere_centers(poses, robot):
    """
    World spheres of all configurations.

    Returns:
        np.ndarray: ``(K, S, 4)`` spheres ``x, y, z, r``, link-major order \
                    (see :attr:`.RobotModel.spheres`).
    """
    spheres = robot.spheres
    owner = robot.sphere_link

    transforms = poses.transforms[:, owner]
    centers = np.einsum(
        "ksij,sj->ksi", transforms[..., :3, :3], spheres[:, :3]
    ) + transforms[..., :3, 3]

    radii = np.broadcast_to(spheres[:, 3], centers.shape[:2])
    return np.concatenate([centers, radii[..., None]], axis=2)


def sample_halton(count, robot, seed_offset=0):
    """
    Halton sequence in the joint limit box. Bases are the first `dof` primes,
    the first sample has index ``seed_offset + 1``.

    Returns:
        np.ndarray: ``(count, dof)`` configurations.
    """
    if count < 1:
        raise ValueError("`count` has to be at least 1.")

    sampler = qmc.Halton(d=robot.dof, scramble=False)
    sampler.fast_forward(seed_offset + 1)
    unit = sampler.random(count)

    return robot.lower + unit * (robot.upper - robot.lower)


def interpolate_cspace(q_start, q_end, count):
    """
    `count` evenly spaced configurations on the straight line, both ends
    included exactly.

    Returns:
        np.ndarray: ``(count, dof)``
    """
    if count < 2:
        raise ValueError("`count` has to be at least 2.")

    q_start = np.asarray(q_start, dtype=np.float64)
    q_end = np.asarray(q_end, dtype=np.float64)

    s = np.linspace(0.0, 1.0, count)[:, None]
    path = (1.0 - s) * q_start + s * q_end

    return np.clip(path, np.minimum(q_start, q_end), np.maximum(q_start, q_end))


def resample_trajectory(waypoints, count):
    """
    Resample piecewise linear C-space path to `count` configurations evenly
    spaced by arc length. Both ends are kept.

    Returns:
        np.ndarray: ``(count, dof)``
    """
    waypoints = np.asarray(waypoints, dtype=np.float64)
    if len(waypoints) == 1 or count == 1:
        return np.repeat(waypoints[:1], count, axis=0)

    steps = np.linalg.norm(np.diff(waypoints, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(steps)])
    if arc[-1] == 0:
        return np.repeat(waypoints[:1], count, axis=0)

    targets = np.linspace(0.0, arc[-1], count)
    resampled = np.column_stack([
        np.interp(targets, arc, waypoints[:, dim])
        for dim in range(waypoints.shape[1])
    ])
    resampled[0] = waypoints[0]
    resampled[-1] = waypoints[-1]

    return resampled


def halton_trajectories(robot, count, waypoints, seed_offset=0):
    """
    Straight C-space lines between consecutive Halton configuration pairs.

    Returns:
        list: `count` ``(waypoints, dof)`` arrays.
    """
    ends = sample_halton(2 * count, robot, seed_offset)

    return [
        interpolate_cspace(ends[2 * i], ends[2 * i + 1], waypoints)
        for i in range(count)
    ]


def load_trajectories(path):
    """
    Read trajectory document.

    Returns:
        list: ``(m, dof)`` arrays.
    """
    try:
        with open(path) as f:
            document = json.load(f)
        if isinstance(document, dict):
            document = document["trajectories"]

        return [np.array(item, dtype=np.float64) for item in document]
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise KinematicsException(
            "Can't read trajectories `%s`: %s" % (path, e)
        ) from e


def save_trajectories(trajectories, path):
    with open(path, "w") as f:
        json.dump(
            {"trajectories": [np.asarray(t).tolist() for t in trajectories]},
            f,
            indent=4
        )
