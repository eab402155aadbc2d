#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from collections import namedtuple

import numpy as np


# Structures ==================================================================
class Obb(namedtuple("Obb", ["center", "half_extents", "rotation"])):
    """
    Oriented bounding box.

    Attributes:
        center (np.ndarray): ``(3,)`` center in meters.
        half_extents (np.ndarray): ``(3,)`` positive half lengths along the
                     box axes.
        rotation (np.ndarray): ``(3, 3)`` orthonormal basis, columns are the
                 box axes.
    """
    def transformed(self, transform):
        """
        Rigidly transform the box.

        Args:
            transform (np.ndarray): ``(4, 4)`` rigid transformation.

        Returns:
            obj: New :class:`Obb`.
        """
        transform = np.asarray(transform, dtype=np.float64)
        rot = transform[:3, :3]

        return Obb(
            center=rot @ self.center + transform[:3, 3],
            half_extents=self.half_extents.copy(),
            rotation=rot @ self.rotation,
        )

    def corners(self):
        """
        Returns:
            np.ndarray: ``(8, 3)`` corners of the box.
        """
        signs = np.array(
            [[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)],
            dtype=np.float64
        )
        return self.center + (signs * self.half_extents) @ self.rotation.T

    def contains(self, points, tolerance=1e-9):
        """
        Args:
            points (np.ndarray): ``(N, 3)`` points.
            tolerance (float): Slack in meters.

        Returns:
            np.ndarray: ``(N,)`` bool, True for points inside the box.
        """
        local = (np.asarray(points, dtype=np.float64) - self.center) @ \
            self.rotation
        return np.all(np.abs(local) <= self.half_extents + tolerance, axis=1)

    @property
    def volume(self):
        return float(8.0 * np.prod(self.half_extents))


class ObbBatch(namedtuple("ObbBatch", ["centers",
                                       "rotations",
                                       "half_extents"])):
    """
    Array of OBBs with arbitrary leading shape, for example ``[config][link]``.

    Attributes:
        centers (np.ndarray): ``(..., 3)``
        rotations (np.ndarray): ``(..., 3, 3)``
        half_extents (np.ndarray): ``(..., 3)``
    """
    @staticmethod
    def from_obbs(obbs):
        """
        Stack list of :class:`Obb` into flat batch.
        """
        obbs = list(obbs)
        if not obbs:
            return ObbBatch(
                np.zeros((0, 3)), np.zeros((0, 3, 3)), np.zeros((0, 3))
            )

        return ObbBatch(
            centers=np.stack([o.center for o in obbs]),
            rotations=np.stack([o.rotation for o in obbs]),
            half_extents=np.stack([o.half_extents for o in obbs]),
        )

    @property
    def shape(self):
        return self.centers.shape[:-1]

    def obb(self, index):
        """
        Args:
            index (int or tuple): Index into the leading shape.

        Returns:
            obj: Single :class:`Obb`.
        """
        return Obb(
            self.centers[index],
            self.half_extents[index],
            self.rotations[index],
        )
