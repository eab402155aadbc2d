#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
"""
Collision detection by ray tracing
==================================

This package checks robot configurations and robot motions for collisions
with static obstacles. Everything is reduced to ray queries against a two
level BVH:

- discrete poses (DCD) are checked by tracing mesh *edge rays* of obstacles
  against robot links and vice versa, plus one *containment ray* per mesh
  for the case when one volume swallows the other,
- motions (CCD) are approximated by swept sphere curves - piecewise linear,
  or quadratic / cubic B-splines fitted to the sphere paths - and directed
  obstacle edges are traced against capsules of the flattened curves,
- accuracy of the approximations is measured on dense voxel grids.

Requests
--------
Build the scene and robot once, then wrap the queries into one of the request
structures and pass them to :func:`process_request`::

    robot = scenes.procedural_arm()
    scene = dcd.build_scene(scenes.procedural_scene("medium"))

    configs = kinematics.sample_halton(4096, robot)
    result = process_request(
        DcdRequest(configs, robot, scene, variant="two-way")
    )

    result.in_collision  # (4096,) bool

Diagram::

    DcdRequest      ----.                      ,--> DcdResult
    CcdRequest      ----|--> process_request --|--> CcdResult
    CoverageRequest ----'                      `--> CoverageMetrics

Note:
    You don't have to import structures from :mod:`datastructures`, they are
    imported and made global in ``__init__.py``.

Benchmarks
----------
The ``raycollide-bench`` console script (:mod:`raycollide.bench`) sweeps
batch sizes and control point counts and writes CSV reports.

API
---
"""
# Imports =====================================================================
from . import dcd
from . import ccd
from . import settings
from . import volumetry
from .datastructures import *

# the star import above binds datastructures' submodules `mesh` and `bench`
# over the same-named top-level modules - rebind the real ones
del mesh, bench
from . import mesh
from . import bench


# Functions & objects =========================================================
def _iiOfAny(instance, classes):
    """
    Returns true, if `instance` is instance of any (_iiOfAny) of the `classes`.
    """
    if not isinstance(classes, (list, tuple)):
        classes = [classes]

    return any(type(instance) == cls for cls in classes)


#: Request types understood by :func:`process_request`.
REQUEST_TYPES = [DcdRequest, CcdRequest, CoverageRequest]


def process_request(req):
    """
    Process one request structure.

    Args:
        req (Request class): :class:`.DcdRequest`, :class:`.CcdRequest` or
            :class:`.CoverageRequest`.

    Returns:
        Result class: :class:`.DcdResult`, :class:`.CcdResult` or \
                      :class:`.CoverageMetrics`.

    Raises:
        ValueError: If bad type of `req` structure is given.
    """
    if _iiOfAny(req, DcdRequest):
        return dcd.detect(
            req.configs,
            req.robot,
            req.scene,
            variant=req.variant,
            broad_phase=req.broad_phase,
            batch_size=req.batch_size,
            detail=req.detail,
        )

    elif _iiOfAny(req, CcdRequest):
        if req.kind == "discretized":
            return ccd.detect_discretized(
                req.trajectories,
                req.robot,
                req.scene,
                req.control_points,
            )

        return ccd.detect_swept(
            req.trajectories,
            req.robot,
            req.scene,
            req.kind,
            req.control_points,
        )

    elif _iiOfAny(req, CoverageRequest):
        return volumetry.coverage(req.approx, req.truth)

    raise ValueError(
        "Unknown type of request: '" + str(type(req)) + "'!"
    )
