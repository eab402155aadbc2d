#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import os
import sys

import pytest

sys.path.insert(
    0,
    os.path.join(os.path.dirname(os.path.dirname(__file__)), "src")
)

from raycollide import dcd  # noqa: E402
from raycollide import scenes  # noqa: E402


# Fixtures ====================================================================
@pytest.fixture
def unit_cube():
    return scenes.box([1, 1, 1])


@pytest.fixture
def sphere():
    return scenes.icosphere(0.5, subdivisions=3)


@pytest.fixture
def ring():
    return scenes.torus(0.3, 0.08)


@pytest.fixture(scope="session")
def planar_arm():
    return scenes.planar_arm()


@pytest.fixture(scope="session")
def arm():
    return scenes.procedural_arm()


@pytest.fixture(scope="session")
def simple_scene():
    return dcd.build_scene(scenes.procedural_scene("simple"))


@pytest.fixture(scope="session")
def empty_scene():
    return dcd.build_scene([])


@pytest.fixture
def write_obj(tmpdir):
    """
    Returns function writing mesh to Wavefront OBJ file in `tmpdir`.
    """
    def write(mesh, name="mesh.obj"):
        path = tmpdir.join(name)
        path.write(
            "".join("v %.17g %.17g %.17g\n" % tuple(v) for v in mesh.vertices) +
            "".join("f %d %d %d\n" % tuple(t + 1) for t in mesh.triangles)
        )
        return str(path)

    return write
