#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from collections import namedtuple

import numpy as np


# Structures ==================================================================
class JointType:
    """
    Enum used as :attr:`Joint.type`.
    """
    REVOLUTE = "revolute"
    PRISMATIC = "prismatic"
    FIXED = "fixed"


class Joint(namedtuple("Joint", ["name",
                                 "type",
                                 "axis",
                                 "origin",
                                 "lower",
                                 "upper"])):
    """
    Joint connecting link to its parent.

    Attributes:
        name (str): Joint name used in error messages.
        type (str): One of :class:`JointType`.
        axis (np.ndarray): ``(3,)`` unit axis in the joint frame.
        origin (np.ndarray): ``(4, 4)`` fixed transform parent -> joint frame.
        lower (float): Lower limit (radians / meters).
        upper (float): Upper limit (radians / meters).
    """
    def __new__(cls, name, type=JointType.FIXED, axis=(0, 0, 1), origin=None,
                lower=0.0, upper=0.0):
        axis = np.asarray(axis, dtype=np.float64)
        if np.linalg.norm(axis) > 0:
            axis = axis / np.linalg.norm(axis)

        if origin is None:
            origin = np.eye(4)

        return super(Joint, cls).__new__(
            cls,
            name,
            type,
            axis,
            np.asarray(origin, dtype=np.float64),
            float(lower),
            float(upper),
        )

    @property
    def actuated(self):
        return self.type != JointType.FIXED


class Link(namedtuple("Link", ["name",
                               "mesh",
                               "obb",
                               "spheres",
                               "parent",
                               "joint"])):
    """
    Rigid body of the robot.

    Attributes:
        name (str): Link name.
        mesh (obj): :class:`.TriangleMesh` in the link frame.
        obb (obj): :class:`.Obb` of the `mesh` in the link frame.
        spheres (np.ndarray): ``(S, 4)`` spheres ``x, y, z, r`` in the link
                frame.
        parent (int): Index of the parent link, ``-1`` for the root.
        joint (obj): :class:`Joint` connecting the link to the parent.
    """
    pass


class RobotModel(namedtuple("RobotModel", ["name", "links"])):
    """
    Kinematic tree with meshes, OBBs and sphere approximation.

    Links are stored in topological order - parent always precedes its
    children. Actuated joints are numbered in the order of the links.

    Attributes:
        name (str): Name of the robot.
        links (tuple): :class:`Link` structures.
    """
    @property
    def actuated(self):
        """
        Returns:
            list: Indices of the links with actuated joints.
        """
        return [i for i, link in enumerate(self.links) if link.joint.actuated]

    @property
    def dof(self):
        return len(self.actuated)

    @property
    def lower(self):
        return np.array([self.links[i].joint.lower for i in self.actuated])

    @property
    def upper(self):
        return np.array([self.links[i].joint.upper for i in self.actuated])

    @property
    def joint_names(self):
        return [self.links[i].joint.name for i in self.actuated]

    @property
    def sphere_count(self):
        return int(sum(len(link.spheres) for link in self.links))

    @property
    def sphere_link(self):
        """
        Returns:
            np.ndarray: ``(S,)`` link index of each sphere in link-major flat
            order.
        """
        return np.concatenate([
            np.full(len(link.spheres), i, dtype=np.int64)
            for i, link in enumerate(self.links)
        ] or [np.zeros(0, dtype=np.int64)])

    @property
    def spheres(self):
        """
        Returns:
            np.ndarray: ``(S, 4)`` body frame spheres in link-major order.
        """
        parts = [link.spheres for link in self.links if len(link.spheres)]
        if not parts:
            return np.zeros((0, 4))

        return np.concatenate(parts)


class PoseBatch(namedtuple("PoseBatch", ["transforms"])):
    """
    Link poses of a batch of configurations.

    Attributes:
        transforms (np.ndarray): ``(K, L, 4, 4)`` world transforms indexed as
                   ``[config][link]``.
    """
    @property
    def config_count(self):
        return self.transforms.shape[0]

    @property
    def link_count(self):
        return self.transforms.shape[1]
