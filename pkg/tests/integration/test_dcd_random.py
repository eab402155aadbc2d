#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import numpy as np
import pytest

from raycollide import dcd
from raycollide import oracle
from raycollide import scenes
from raycollide import kinematics
from raycollide.datastructures import Joint
from raycollide.datastructures import JointType


# Functions & objects =========================================================
def free_body(mesh):
    return kinematics.make_robot("body", [
        kinematics.make_link(
            "body",
            mesh,
            joint=Joint("slide", JointType.PRISMATIC, [1, 0, 0],
                        lower=-1, upper=1),
        ),
    ])


def random_mesh(rng, center):
    kind = rng.randint(3)
    if kind == 0:
        return scenes.box(rng.uniform(0.02, 0.3, 3), center)
    if kind == 1:
        return scenes.icosphere(rng.uniform(0.01, 0.15), center,
                                subdivisions=2)

    major = rng.uniform(0.05, 0.15)
    return scenes.torus(major, rng.uniform(0.2, 0.5) * major, center,
                        sections=16)


def needle_offsets(rng, count):
    """
    Needle positions through a unit cube face, clear of the face diagonals
    and the cube edges, off the coordinate planes.
    """
    offsets = []
    while len(offsets) < count:
        x, y = rng.uniform(-0.4, 0.4, 2)
        if abs(abs(x) - abs(y)) > 0.03 and min(abs(x), abs(y)) > 0.03:
            offsets.append((x, y))

    return offsets


# Tests =======================================================================
@pytest.mark.parametrize("seed", range(4))
def test_random_scenes_match_oracle(seed):
    rng = np.random.RandomState(seed)

    compared = 0
    for _ in range(50):
        robot = free_body(random_mesh(rng, [0, 0, 0]))
        obstacle = random_mesh(rng, rng.uniform(-0.15, 0.15, 3))
        configs = rng.uniform(-0.3, 0.3, (4, 1))

        result = dcd.detect(configs, robot, dcd.build_scene([obstacle]))

        for config, flag in zip(configs, result.in_collision):
            label = oracle.pose_label(config, robot, [obstacle])
            if label is not None:
                assert flag == label
                compared += 1

    assert compared >= 180


def test_needle_through_robot():
    robot = free_body(scenes.box([1, 1, 1]))

    for x, y in needle_offsets(np.random.RandomState(5), 50):
        scene = dcd.build_scene([scenes.needle(2.0, 0.01, [x, y, 0])])
        flags = [
            dcd.detect([[0.0]], robot, scene, variant).in_collision[0]
            for variant in (dcd.Variant.OBS2ROB, dcd.Variant.ROB2OBS,
                            dcd.Variant.TWO_WAY)
        ]

        assert flags == [True, False, True]


def test_robot_needle_through_obstacle():
    scene = dcd.build_scene([scenes.box([1, 1, 1])])

    for x, y in needle_offsets(np.random.RandomState(6), 50):
        robot = free_body(scenes.needle(2.0, 0.01, [0, y, 0]))
        flags = [
            dcd.detect([[x]], robot, scene, variant).in_collision[0]
            for variant in (dcd.Variant.OBS2ROB, dcd.Variant.ROB2OBS,
                            dcd.Variant.TWO_WAY)
        ]

        assert flags == [False, True, True]
