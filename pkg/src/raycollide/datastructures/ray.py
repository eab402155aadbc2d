#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import math
from collections import namedtuple

import numpy as np


# Structures ==================================================================
class FaceSide:
    """
    Enum used as :attr:`Hit.face_side`.
    """
    FRONT = "front"
    BACK = "back"


class Ray(namedtuple("Ray", ["origin", "direction", "t_min", "t_max"])):
    """
    Ray segment ``origin + t * direction`` for ``t_min <= t <= t_max``.

    Attributes:
        origin (np.ndarray): ``(3,)`` start point.
        direction (np.ndarray): ``(3,)`` unit direction. It is normalized by
                  the constructor.
        t_min (float, default 0): Lower bound of the ray parameter.
        t_max (float, default inf): Upper bound, meters along `direction`.
    """
    def __new__(cls, origin, direction, t_min=0.0, t_max=math.inf):
        direction = np.asarray(direction, dtype=np.float64)
        length = np.linalg.norm(direction)
        if length > 0:
            direction = direction / length

        return super(Ray, cls).__new__(
            cls,
            np.asarray(origin, dtype=np.float64),
            direction,
            float(t_min),
            float(t_max),
        )

    @staticmethod
    def segment(start, end):
        """
        Ray covering the line segment `start` -> `end`.
        """
        start = np.asarray(start, dtype=np.float64)
        end = np.asarray(end, dtype=np.float64)
        delta = end - start

        return Ray(start, delta, 0.0, float(np.linalg.norm(delta)))


class RayBatch(namedtuple("RayBatch", ["origins",
                                       "directions",
                                       "t_min",
                                       "t_max"])):
    """
    Structure of arrays version of :class:`Ray`.

    Attributes:
        origins (np.ndarray): ``(N, 3)``
        directions (np.ndarray): ``(N, 3)`` unit directions.
        t_min (np.ndarray): ``(N,)``
        t_max (np.ndarray): ``(N,)``
    """
    @staticmethod
    def from_rays(rays):
        rays = list(rays)
        if not rays:
            return RayBatch.empty()

        return RayBatch(
            origins=np.stack([r.origin for r in rays]),
            directions=np.stack([r.direction for r in rays]),
            t_min=np.array([r.t_min for r in rays], dtype=np.float64),
            t_max=np.array([r.t_max for r in rays], dtype=np.float64),
        )

    @staticmethod
    def from_segments(starts, ends):
        """
        Rays along segments `starts[i]` -> `ends[i]`, ``t_max`` = length.
        """
        starts = np.asarray(starts, dtype=np.float64).reshape(-1, 3)
        ends = np.asarray(ends, dtype=np.float64).reshape(-1, 3)
        delta = ends - starts
        length = np.linalg.norm(delta, axis=1)
        safe = np.where(length > 0, length, 1.0)

        return RayBatch(
            origins=starts,
            directions=delta / safe[:, None],
            t_min=np.zeros(len(starts)),
            t_max=length,
        )

    @staticmethod
    def empty():
        return RayBatch(
            np.zeros((0, 3)), np.zeros((0, 3)), np.zeros(0), np.zeros(0)
        )

    @property
    def size(self):
        return len(self.origins)

    def take(self, index):
        """
        Select subset of rays by index array or mask.
        """
        return RayBatch(
            self.origins[index],
            self.directions[index],
            self.t_min[index],
            self.t_max[index],
        )

    def ray(self, i):
        return Ray(
            self.origins[i], self.directions[i], self.t_min[i], self.t_max[i]
        )


class Hit(namedtuple("Hit", ["t",
                             "primitive_id",
                             "instance_id",
                             "face_side"])):
    """
    Intersection of a ray with a primitive.

    Attributes:
        t (float): Ray parameter of the hit.
        primitive_id (int): Triangle / curve segment index in its geometry.
        instance_id (int): Instance id inside :class:`.SceneIndex`, ``-1`` for
                    queries on bare geometry.
        face_side (str): :attr:`FaceSide.FRONT` / :attr:`FaceSide.BACK`, None
                  for curves.
    """
    pass


class HitSet(namedtuple("HitSet", ["ray",
                                   "instance",
                                   "primitive",
                                   "t",
                                   "front"])):
    """
    All hits of a ray batch, structure of arrays.

    Attributes:
        ray (np.ndarray): ``(H,)`` ray index of each hit.
        instance (np.ndarray): ``(H,)`` instance index.
        primitive (np.ndarray): ``(H,)`` primitive index.
        t (np.ndarray): ``(H,)`` ray parameter.
        front (np.ndarray): ``(H,)`` bool, True for front face hits.
    """
    @staticmethod
    def empty():
        return HitSet(
            np.zeros(0, dtype=np.int64),
            np.zeros(0, dtype=np.int64),
            np.zeros(0, dtype=np.int64),
            np.zeros(0),
            np.zeros(0, dtype=bool),
        )

    @staticmethod
    def concatenate(hitsets):
        hitsets = [h for h in hitsets if len(h.ray)]
        if not hitsets:
            return HitSet.empty()

        return HitSet(*[
            np.concatenate([getattr(h, field) for h in hitsets])
            for field in HitSet._fields
        ])

    @property
    def size(self):
        return len(self.ray)

    def take(self, index):
        return HitSet(*[getattr(self, field)[index] for field in self._fields])
