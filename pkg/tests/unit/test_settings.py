#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import pytest

from raycollide import settings


# Fixtures ====================================================================
@pytest.fixture
def restore_settings():
    backup = {key: getattr(settings, key) for key in settings.get_all_constants()}
    yield
    settings.substitute_globals(backup)


# Tests =======================================================================
def test_get_all_constants():
    constants = settings.get_all_constants()

    assert "OBB_EPSILON" in constants
    assert "SPLINE_FIT_SAMPLES" in constants
    assert "LOG_LEVEL" in constants
    assert not any(key.startswith("_") for key in constants)


def test_substitute_globals(restore_settings):
    settings.substitute_globals({
        "RAY_CHUNK": 128,
        "OBB_EPSILON": 0,
        "UNKNOWN_KEY": 1,
        "_ALLOWED": "nope",
    })

    assert settings.RAY_CHUNK == 128
    assert settings.OBB_EPSILON == 0.0
    assert isinstance(settings.OBB_EPSILON, float)
    assert not hasattr(settings, "UNKNOWN_KEY")


def test_substitute_globals_type_mismatch(restore_settings):
    settings.substitute_globals({"RAY_CHUNK": "many", "LOG_LEVEL": 10})

    assert settings.RAY_CHUNK == 4096
    assert settings.LOG_LEVEL == "WARNING"


def test_substitute_globals_ignores_non_dict(restore_settings):
    settings.substitute_globals(["RAY_CHUNK", 1])

    assert settings.RAY_CHUNK == 4096
