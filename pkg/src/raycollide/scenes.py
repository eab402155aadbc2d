#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Procedural meshes, robots and obstacle scenes used by the benchmark harness
and by the tests.

Meshes are created by :mod:`trimesh.creation` and converted to validated
:class:`.TriangleMesh`. All scenes are deterministic.
"""
import numpy as np
import trimesh

from .mesh import from_trimesh
from .geometry import make_transform
from .geometry import rotation_matrix
from .kinematics import make_link
from .kinematics import make_robot
from .datastructures import Joint
from .datastructures import JointType


# Variables ===================================================================
#: Link lengths of the procedural arm (base first).
ARM_LENGTHS = [0.15, 0.18, 0.16, 0.16, 0.14, 0.12, 0.1, 0.08]

#: Capsule radii of the arm links.
ARM_RADII = [0.07, 0.06, 0.055, 0.05, 0.045, 0.04, 0.035, 0.03]

#: Spheres per arm link, 62 in total.
ARM_SPHERES = [4, 10, 10, 10, 8, 8, 6, 6]

#: Axes of the seven revolute joints.
ARM_AXES = [
    [0, 0, 1], [0, 1, 0], [0, 0, 1], [0, 1, 0], [0, 0, 1], [0, 1, 0],
    [0, 0, 1],
]

#: Joint limits of the arm.
ARM_LIMITS = [
    (-2.8, 2.8), (-1.7, 1.7), (-2.8, 2.8), (-2.9, -0.1), (-2.8, 2.8),
    (-0.1, 3.6), (-2.8, 2.8),
]

PROCEDURAL_SCENES = ["empty", "simple", "medium", "dense"]


# Functions & objects =========================================================
def box(extents, center=(0, 0, 0), rotation=None):
    return from_trimesh(trimesh.creation.box(
        extents=extents,
        transform=make_transform(rotation, center),
    ))


def icosphere(radius, center=(0, 0, 0), subdivisions=2):
    sphere = trimesh.creation.icosphere(subdivisions=subdivisions,
                                        radius=radius)
    sphere.apply_translation(center)

    return from_trimesh(sphere)


def torus(major_radius, minor_radius, center=(0, 0, 0), sections=32):
    ring = trimesh.creation.torus(
        major_radius=major_radius,
        minor_radius=minor_radius,
        major_sections=sections,
        minor_sections=max(8, sections // 2),
    )
    ring.apply_translation(center)

    return from_trimesh(ring)


def capsule(length, radius, count=16):
    """
    Capsule along +z from the origin to ``(0, 0, length)``.
    """
    body = trimesh.creation.capsule(height=length, radius=radius,
                                    count=[count, count])
    body.apply_translation([0, 0, length / 2.0])

    return from_trimesh(body)


def needle(length, width, center=(0, 0, 0), axis=(0, 0, 1)):
    """
    Long thin box along `axis`. Needle passing through a face doesn't touch
    any edge of the pierced mesh.
    """
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)

    rotation = np.eye(3)
    cross = np.cross([0, 0, 1], axis)
    if np.linalg.norm(cross) > 1e-12:
        angle = np.arccos(np.clip(axis[2], -1, 1))
        rotation = rotation_matrix(cross, angle)
    elif axis[2] < 0:
        rotation = rotation_matrix([1, 0, 0], np.pi)

    return box([width, width, length], center, rotation)


def fin(size, thickness, center=(0, 0, 0)):
    """
    Large thin triangular prism in the xy plane. Its two caps are single
    triangles with big incircle.
    """
    corners = size * np.array([
        [-0.5, -np.sqrt(3) / 6, 0],
        [0.5, -np.sqrt(3) / 6, 0],
        [0.0, np.sqrt(3) / 3, 0],
    ])
    prism = trimesh.creation.extrude_triangulation(
        corners[:, :2], [[0, 1, 2]], thickness
    )
    prism.apply_translation(np.asarray(center) - [0, 0, thickness / 2.0])

    return from_trimesh(prism)


def _link_spheres(length, radius, count):
    """
    Spheres along the link axis covering the capsule of `radius`.
    """
    if count == 1:
        return [[0, 0, length / 2.0, radius + length / 2.0]]

    spacing = length / (count - 1)
    covering = np.sqrt(radius ** 2 + (spacing / 2.0) ** 2)

    return [
        [0.0, 0.0, z, covering]
        for z in np.linspace(0.0, length, count)
    ]


def procedural_arm(name="arm7"):
    """
    7-DoF serial arm of capsule links with 62 spheres.

    Returns:
        obj: :class:`.RobotModel`.
    """
    links = [make_link(
        "base",
        capsule(ARM_LENGTHS[0], ARM_RADII[0]),
        spheres=_link_spheres(ARM_LENGTHS[0], ARM_RADII[0], ARM_SPHERES[0]),
    )]

    for i in range(7):
        length, radius = ARM_LENGTHS[i + 1], ARM_RADII[i + 1]
        joint = Joint(
            name="joint%d" % (i + 1),
            type=JointType.REVOLUTE,
            axis=ARM_AXES[i],
            origin=make_transform(translation=[0, 0, ARM_LENGTHS[i]]),
            lower=ARM_LIMITS[i][0],
            upper=ARM_LIMITS[i][1],
        )
        links.append(make_link(
            "link%d" % (i + 1),
            capsule(length, radius),
            parent=i,
            joint=joint,
            spheres=_link_spheres(length, radius, ARM_SPHERES[i + 1]),
        ))

    return make_robot(name, links)


def planar_arm(lengths=(0.5, 0.4), width=0.04, name="planar2"):
    """
    Planar arm of box links rotating about +z, used by small tests.
    """
    links = []
    for i, length in enumerate(lengths):
        joint = Joint(
            name="joint%d" % (i + 1),
            type=JointType.REVOLUTE,
            axis=[0, 0, 1],
            origin=make_transform(
                translation=[lengths[i - 1] if i else 0.0, 0, 0]
            ),
            lower=-np.pi,
            upper=np.pi,
        )
        links.append(make_link(
            "link%d" % (i + 1),
            box([length, width, width], center=[length / 2.0, 0, 0]),
            parent=i - 1,
            joint=joint,
            spheres=[
                [x, 0, 0, width]
                for x in np.linspace(0, length, max(2, int(length / width)))
            ],
        ))

    return make_robot(name, links)


def _shelf(center, width=0.8, depth=0.35, height=1.0, boards=3):
    x, y, z = center
    board = 0.02
    parts = [
        box([width, board, height], [x, y + depth / 2.0, z + height / 2.0]),
        box([board, depth, height], [x - width / 2.0, y, z + height / 2.0]),
        box([board, depth, height], [x + width / 2.0, y, z + height / 2.0]),
    ]
    for level in np.linspace(0.0, height, boards):
        parts.append(box(
            [width - 2 * board - 1e-3, depth - board - 1e-3, board],
            [x, y - board / 2.0, z + level + board / 2.0],
        ))

    return parts


def procedural_scene(name="simple"):
    """
    Obstacle meshes of named procedural scene.

    Args:
        name (str): One of :attr:`PROCEDURAL_SCENES`.

    Returns:
        list: :class:`.TriangleMesh` obstacles in world frame.

    Raises:
        ValueError: For unknown `name`.
    """
    if name == "empty":
        return []

    if name == "simple":
        return [
            box([1.2, 0.8, 0.05], [0.5, 0.0, -0.15]),
            icosphere(0.1, [0.45, 0.25, 0.45]),
        ]

    if name == "medium":
        return _shelf([0.55, 0.0, 0.0]) + [
            box([0.08, 0.08, 0.12], [0.5, -0.05, 0.40]),
            icosphere(0.05, [0.65, -0.05, 0.37]),
            torus(0.06, 0.015, [0.4, 0.25, 0.55]),
        ]

    if name == "dense":
        rng = np.random.RandomState(1)
        parts = _shelf([0.55, 0.0, 0.0], boards=4) + \
            _shelf([-0.1, 0.6, 0.0], boards=4)

        for _ in range(24):
            center = rng.uniform([-0.6, -0.6, 0.1], [0.8, 0.6, 1.0])
            while np.hypot(center[0], center[1]) < 0.25:
                center = rng.uniform([-0.6, -0.6, 0.1], [0.8, 0.6, 1.0])
            if rng.rand() < 0.5:
                parts.append(box(rng.uniform(0.03, 0.1, 3), center))
            else:
                parts.append(icosphere(rng.uniform(0.02, 0.06), center, 1))

        return parts

    raise ValueError(
        "Unknown procedural scene `%s` (use one of %s)." % (
            name,
            ", ".join(PROCEDURAL_SCENES),
        )
    )
