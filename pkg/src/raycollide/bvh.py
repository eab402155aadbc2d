#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Bounding volume hierarchy over triangles, capsules or boxes.

The tree is built by binned surface area heuristic and stored as flat numpy
arrays, so it can be traversed by whole waves of rays at once::

    bvh = build_bvh(mesh)
    rays, primitives = candidate_pairs(bvh, origins, directions, t_min, t_max)

:func:`candidate_pairs` returns only the primitives whose leaf box is crossed
by the ray, exact primitive tests are done in :mod:`raycollide.rt`.
"""
import logging
from collections import namedtuple

import numpy as np

from . import settings
from .datastructures import TriangleMesh


# Variables ===================================================================
logger = logging.getLogger(__name__)

#: Absolute padding (meters) of node boxes.
_BOX_PADDING = 1e-9

#: Smallest direction component used by the slab test.
_TINY = 1e-300


# Structures ==================================================================
class Triangles(namedtuple("Triangles", ["corners"])):
    """
    Attributes:
        corners (np.ndarray): ``(F, 3, 3)`` triangle corners.
    """
    @property
    def size(self):
        return len(self.corners)

    def bounds(self):
        return self.corners.min(axis=1), self.corners.max(axis=1)


class Capsules(namedtuple("Capsules", ["starts", "ends", "radii", "owner"])):
    """
    Segments with radius - flattened swept sphere curves.

    Attributes:
        starts (np.ndarray): ``(C, 3)``
        ends (np.ndarray): ``(C, 3)``
        radii (np.ndarray): ``(C,)``
        owner (np.ndarray): ``(C,)`` index of the curve each capsule belongs
              to.
    """
    @property
    def size(self):
        return len(self.starts)

    def bounds(self):
        radius = self.radii[:, None]
        return (
            np.minimum(self.starts, self.ends) - radius,
            np.maximum(self.starts, self.ends) + radius,
        )


class Boxes(namedtuple("Boxes", ["lower", "upper"])):
    """
    Axis aligned boxes, used for the instance level tree.
    """
    @property
    def size(self):
        return len(self.lower)

    def bounds(self):
        return self.lower, self.upper


class Bvh(namedtuple("Bvh", ["lower",
                             "upper",
                             "left",
                             "right",
                             "start",
                             "count",
                             "order",
                             "primitives"])):
    """
    Flat binary tree. Node 0 is the root.

    Attributes:
        lower (np.ndarray): ``(N, 3)`` node box minima.
        upper (np.ndarray): ``(N, 3)`` node box maxima.
        left (np.ndarray): ``(N,)`` left child, ``-1`` for leaves.
        right (np.ndarray): ``(N,)`` right child, ``-1`` for leaves.
        start (np.ndarray): ``(N,)`` first index into `order` of a leaf.
        count (np.ndarray): ``(N,)`` primitive count of a leaf, 0 for inner
              nodes.
        order (np.ndarray): ``(P,)`` permutation of primitive indices.
        primitives (obj): :class:`Triangles`, :class:`Capsules` or
                   :class:`Boxes` the tree is built over.
    """
    @property
    def node_count(self):
        return len(self.left)

    @property
    def leaf_count(self):
        return int(np.count_nonzero(self.count))

    def __repr__(self):
        return "Bvh(%s=%d, nodes=%d, leaves=%d)" % (
            type(self.primitives).__name__.lower(),
            self.primitives.size,
            self.node_count,
            self.leaf_count,
        )


# Functions & objects =========================================================
def _half_area(lower, upper):
    size = np.maximum(upper - lower, 0.0)
    return size[..., 0] * size[..., 1] + \
        size[..., 1] * size[..., 2] + \
        size[..., 2] * size[..., 0]


def _sah_split(prim_lower, prim_upper, centroids):
    """
    Find the best binned SAH split of one node.

    Returns:
        np.ndarray: Bool mask of primitives going to the left child, or None
        if no split separates the primitives.
    """
    bins = settings.SAH_BINS
    c_min = centroids.min(axis=0)
    extent = centroids.max(axis=0) - c_min

    best_cost = np.inf
    best = None
    for axis in range(3):
        if extent[axis] <= 0:
            continue

        index = ((centroids[:, axis] - c_min[axis]) * (bins / extent[axis]))
        index = np.minimum(index.astype(np.int64), bins - 1)

        counts = np.bincount(index, minlength=bins)
        bin_lower = np.full((bins, 3), np.inf)
        bin_upper = np.full((bins, 3), -np.inf)
        np.minimum.at(bin_lower, index, prim_lower)
        np.maximum.at(bin_upper, index, prim_upper)

        left_count = np.cumsum(counts)[:-1]
        right_count = np.cumsum(counts[::-1])[::-1][1:]
        left_area = _half_area(
            np.minimum.accumulate(bin_lower)[:-1],
            np.maximum.accumulate(bin_upper)[:-1],
        )
        right_area = _half_area(
            np.minimum.accumulate(bin_lower[::-1])[::-1][1:],
            np.maximum.accumulate(bin_upper[::-1])[::-1][1:],
        )

        cost = left_count * left_area + right_count * right_area
        cost[(left_count == 0) | (right_count == 0)] = np.inf

        # first minimum wins - lowest axis, then lowest bin
        split = int(np.argmin(cost))
        if cost[split] < best_cost:
            best_cost = cost[split]
            best = index <= split

    return best


def _median_split(centroids, indices):
    """
    Stable split in half along the widest centroid axis.
    """
    extent = centroids.max(axis=0) - centroids.min(axis=0)
    axis = int(np.argmax(extent))
    order = np.lexsort((indices, centroids[:, axis]))

    mask = np.zeros(len(indices), dtype=bool)
    mask[order[:len(indices) // 2]] = True

    return mask


def _as_primitives(primitives):
    if isinstance(primitives, (Triangles, Capsules, Boxes)):
        return primitives

    if isinstance(primitives, TriangleMesh):
        return Triangles(primitives.corners)

    corners = np.asarray(primitives, dtype=np.float64)
    if corners.ndim == 3 and corners.shape[1:] == (3, 3):
        return Triangles(corners)

    raise ValueError("Unsupported primitive container %r." % type(primitives))


def build_bvh(primitives):
    """
    Build BVH by binned SAH with :attr:`~raycollide.settings.SAH_BINS` bins
    and leaves of at most :attr:`~raycollide.settings.BVH_LEAF_SIZE`
    primitives. Ties are broken by primitive index, so the same input always
    gives the same tree.

    Args:
        primitives (obj): :class:`.TriangleMesh`, ``(F, 3, 3)`` corner array,
                   :class:`Triangles`, :class:`Capsules` or :class:`Boxes`.

    Returns:
        obj: :class:`Bvh`.

    Raises:
        ValueError: For empty input.
    """
    primitives = _as_primitives(primitives)
    if primitives.size == 0:
        raise ValueError("Can't build BVH over zero primitives.")

    prim_lower, prim_upper = primitives.bounds()
    prim_lower = prim_lower - _BOX_PADDING
    prim_upper = prim_upper + _BOX_PADDING
    centroids = 0.5 * (prim_lower + prim_upper)

    order = np.arange(primitives.size)
    lower, upper, left, right, start, count = [], [], [], [], [], []

    def new_node(begin, end):
        items = order[begin:end]
        lower.append(prim_lower[items].min(axis=0))
        upper.append(prim_upper[items].max(axis=0))
        left.append(-1)
        right.append(-1)
        start.append(begin)
        count.append(0)
        return len(left) - 1

    stack = [(new_node(0, len(order)), 0, len(order))]
    while stack:
        node, begin, end = stack.pop()
        items = order[begin:end]

        if end - begin <= settings.BVH_LEAF_SIZE:
            count[node] = end - begin
            continue

        mask = _sah_split(prim_lower[items], prim_upper[items], centroids[items])
        if mask is None:
            mask = _median_split(centroids[items], items)

        order[begin:end] = np.concatenate([items[mask], items[~mask]])
        middle = begin + int(np.count_nonzero(mask))

        left[node] = new_node(begin, middle)
        right[node] = new_node(middle, end)

        stack.append((right[node], middle, end))
        stack.append((left[node], begin, middle))

    bvh = Bvh(
        lower=np.array(lower),
        upper=np.array(upper),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        start=np.array(start, dtype=np.int64),
        count=np.array(count, dtype=np.int64),
        order=order,
        primitives=primitives,
    )
    logger.debug("Built %r", bvh)

    return bvh


def safe_inverse(directions):
    """
    Component-wise ``1 / direction`` without infinities.
    """
    directions = np.asarray(directions, dtype=np.float64)
    safe = np.where(
        np.abs(directions) > _TINY,
        directions,
        np.where(directions < 0, -_TINY, _TINY)
    )

    return 1.0 / safe


def slab_hits(lower, upper, origins, inverse, t_min, t_max):
    """
    Ray vs. axis aligned box test of aligned arrays.

    Returns:
        np.ndarray: Bool mask of rays crossing their box within
        ``[t_min, t_max]``.
    """
    with np.errstate(invalid="ignore", over="ignore"):
        t1 = (lower - origins) * inverse
        t2 = (upper - origins) * inverse

    near = np.nanmax(np.minimum(t1, t2), axis=-1)
    far = np.nanmin(np.maximum(t1, t2), axis=-1)

    return (near <= far) & (far >= t_min) & (near <= t_max)


def candidate_pairs(bvh, origins, directions, t_min, t_max):
    """
    Traverse the tree with a wave of rays.

    Args:
        bvh (obj): :class:`Bvh`.
        origins (np.ndarray): ``(N, 3)``
        directions (np.ndarray): ``(N, 3)``
        t_min (np.ndarray): ``(N,)``
        t_max (np.ndarray): ``(N,)``

    Returns:
        tuple: ``(ray, primitive)`` index arrays of all primitives in leaves \
               crossed by the rays.
    """
    inverse = safe_inverse(directions)

    ray = np.arange(len(origins))
    node = np.zeros(len(origins), dtype=np.int64)

    found_rays = []
    found_prims = []
    while ray.size:
        hit = slab_hits(
            bvh.lower[node],
            bvh.upper[node],
            origins[ray],
            inverse[ray],
            t_min[ray],
            t_max[ray],
        )
        ray = ray[hit]
        node = node[hit]

        leaf = bvh.count[node] > 0
        if leaf.any():
            leaf_rays = ray[leaf]
            leaf_nodes = node[leaf]
            counts = bvh.count[leaf_nodes]

            offsets = np.arange(counts.sum()) - \
                np.repeat(np.cumsum(counts) - counts, counts)

            found_rays.append(np.repeat(leaf_rays, counts))
            found_prims.append(
                bvh.order[np.repeat(bvh.start[leaf_nodes], counts) + offsets]
            )

        inner = ~leaf
        ray = np.concatenate([ray[inner], ray[inner]])
        node = np.concatenate([bvh.left[node[inner]], bvh.right[node[inner]]])

    if not found_rays:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)

    return np.concatenate(found_rays), np.concatenate(found_prims)


def validate_bvh(bvh):
    """
    Walk the tree and check the containment invariants.

    Returns:
        bool: True if every primitive box is in its leaf box, every child box
        in its parent box and leaves partition the primitives.
    """
    prim_lower, prim_upper = bvh.primitives.bounds()
    seen = np.zeros(bvh.primitives.size, dtype=np.int64)

    for node in range(bvh.node_count):
        if bvh.count[node]:
            items = bvh.order[
                bvh.start[node]:bvh.start[node] + bvh.count[node]
            ]
            seen[items] += 1
            if np.any(prim_lower[items] < bvh.lower[node]) or \
               np.any(prim_upper[items] > bvh.upper[node]):
                return False
            continue

        for child in (bvh.left[node], bvh.right[node]):
            if np.any(bvh.lower[child] < bvh.lower[node]) or \
               np.any(bvh.upper[child] > bvh.upper[node]):
                return False

    return bool(np.all(seen == 1))
