#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import numpy as np
import pytest

from raycollide import bvh
from raycollide import oracle
from raycollide.geometry import normalize


# Tests =======================================================================
def test_build_bvh(sphere):
    tree = bvh.build_bvh(sphere)

    assert bvh.validate_bvh(tree)
    assert tree.leaf_count >= len(sphere.triangles) // 4
    assert np.all(tree.count <= 4)
    assert sorted(tree.order.tolist()) == list(range(len(sphere.triangles)))


def test_build_bvh_deterministic(ring):
    first = bvh.build_bvh(ring.corners)
    second = bvh.build_bvh(ring.corners)

    assert np.array_equal(first.order, second.order)
    assert np.array_equal(first.left, second.left)


def test_build_bvh_empty():
    with pytest.raises(ValueError):
        bvh.build_bvh(np.zeros((0, 3, 3)))


def test_build_bvh_boxes():
    lower = np.arange(30, dtype=float).reshape(10, 3)
    tree = bvh.build_bvh(bvh.Boxes(lower, lower + 0.5))

    assert bvh.validate_bvh(tree)


def test_build_bvh_capsules():
    starts = np.random.RandomState(0).rand(50, 3)
    capsules = bvh.Capsules(starts, starts + 0.1, np.full(50, 0.05),
                            np.arange(50))

    assert bvh.validate_bvh(bvh.build_bvh(capsules))


def test_candidate_pairs_conservative(ring):
    rng = np.random.RandomState(3)
    origins = rng.uniform(-0.6, 0.6, (200, 3))
    directions = normalize(rng.normal(size=(200, 3)))
    t_min = np.zeros(200)
    t_max = np.full(200, np.inf)

    tree = bvh.build_bvh(ring)
    rays, prims = bvh.candidate_pairs(tree, origins, directions, t_min, t_max)
    candidates = set(zip(rays.tolist(), prims.tolist()))

    for i in range(200):
        t = oracle.ray_triangles(origins[i], directions[i], ring.corners)
        for face in np.flatnonzero(np.isfinite(t)):
            assert (i, face) in candidates


def test_candidate_pairs_respects_t_max(unit_cube):
    tree = bvh.build_bvh(unit_cube)
    origins = np.array([[-5.0, 0, 0]])
    directions = np.array([[1.0, 0, 0]])

    rays, _ = bvh.candidate_pairs(tree, origins, directions, np.zeros(1),
                                  np.array([1.0]))
    assert rays.size == 0

    rays, _ = bvh.candidate_pairs(tree, origins, directions, np.zeros(1),
                                  np.array([10.0]))
    assert rays.size > 0


def test_safe_inverse():
    inverse = bvh.safe_inverse([[0.0, -0.0, 2.0]])

    assert np.all(np.isfinite(inverse))
    assert inverse[0, 2] == 0.5
