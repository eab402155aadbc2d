#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import numpy as np
import pytest

from raycollide import mesh
from raycollide import scenes
from raycollide import kinematics


# Tests =======================================================================
@pytest.mark.parametrize("name, count", [
    ("empty", 0),
    ("simple", 2),
    ("medium", 9),
    ("dense", 38),
])
def test_procedural_scene(name, count):
    meshes = scenes.procedural_scene(name)

    assert len(meshes) == count
    for obstacle in meshes:
        report = mesh.validation_report(obstacle.vertices, obstacle.triangles)
        assert report["watertight"]
        assert obstacle.volume > 0


def test_procedural_scene_deterministic():
    first = scenes.procedural_scene("dense")
    second = scenes.procedural_scene("dense")

    for a, b in zip(first, second):
        assert np.array_equal(a.vertices, b.vertices)
        assert np.array_equal(a.triangles, b.triangles)


def test_procedural_scene_unknown():
    with pytest.raises(ValueError):
        scenes.procedural_scene("cluttered")


def test_needle():
    body = scenes.needle(0.4, 0.01, center=[1, 0, 0], axis=[1, 0, 0])
    lower, upper = body.vertices.min(axis=0), body.vertices.max(axis=0)

    assert np.allclose(upper - lower, [0.4, 0.01, 0.01])
    assert np.allclose((upper + lower) / 2, [1, 0, 0])


def test_needle_down():
    body = scenes.needle(0.4, 0.01, axis=[0, 0, -1])

    assert np.allclose(np.ptp(body.vertices, axis=0), [0.01, 0.01, 0.4])
    assert body.volume == pytest.approx(0.4 * 0.01 ** 2)


def test_fin():
    prism = scenes.fin(0.5, 0.01, center=[0, 0, 0.3])

    assert len(prism.triangles) == 8
    assert np.allclose(prism.vertices[:, 2].min(), 0.295)
    assert np.allclose(prism.vertices[:, 2].max(), 0.305)
    assert prism.volume == pytest.approx(np.sqrt(3) / 4 * 0.5 ** 2 * 0.01)


def test_capsule():
    body = scenes.capsule(0.2, 0.05)

    assert body.vertices[:, 2].min() == pytest.approx(-0.05)
    assert body.vertices[:, 2].max() == pytest.approx(0.25)


def test_procedural_arm(arm):
    assert arm.dof == 7
    assert len(arm.links) == 8
    assert arm.sphere_count == sum(scenes.ARM_SPHERES) == 62
    assert arm.joint_names == ["joint%d" % i for i in range(1, 8)]
    assert np.all(arm.lower < arm.upper)


def test_procedural_arm_spheres_cover_links(arm):
    for link in arm.links:
        centers, radii = link.spheres[:, :3], link.spheres[:, 3]
        distances = np.linalg.norm(
            link.mesh.vertices[:, None] - centers[None], axis=2
        )

        assert np.all((distances <= radii + 1e-9).any(axis=1))


def test_planar_arm(planar_arm):
    assert planar_arm.dof == 2

    poses = kinematics.forward_kinematics_batch(np.zeros((1, 2)), planar_arm)
    tip = poses.transforms[0, 1, :3, 3]

    assert np.allclose(tip, [0.5, 0, 0])
