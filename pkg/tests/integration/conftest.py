#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import pytest

from raycollide import scenes


# Fixtures ====================================================================
@pytest.fixture(scope="session")
def medium_meshes():
    return scenes.procedural_scene("medium")
