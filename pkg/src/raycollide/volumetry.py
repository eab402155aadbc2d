#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Volume coverage measurement by dense voxelization.

Voxel is occupied when its center is inside the volume. Meshes are voxelized
by parity of column rays along +x, spheres and swept spheres analytically::

    bounds = bounds_around(points, settings.VOXEL_MARGIN)
    truth = swept_truth_grid(robot, trajectory, 0.002, bounds)
    approx = voxelize_swept_spheres(curves, 0.002, bounds)
    metrics = coverage(approx, truth)

Grids can be stored by :func:`save_grid` / :func:`load_grid` in small binary
format: header ``b"RCVG"``, version, origin, resolution and dims followed by
bit-packed C-order occupancy.

There is also defined exception tree - see :class:`VolumetryException`
doc-string for details.
"""
import json
import math
import struct
import logging

import numpy as np

from . import rt
from . import settings
from . import parallel
from . import kinematics
from .bvh import build_bvh
from .geometry import aabb
from .datastructures import RayBatch
from .datastructures import VoxelGrid
from .datastructures import CoverageMetrics


# Variables ===================================================================
logger = logging.getLogger(__name__)

GRID_MAGIC = b"RCVG"
GRID_VERSION = 1
_HEADER = struct.Struct("<4sI4d3I")


# Functions & objects =========================================================
class VolumetryException(Exception):
    """
    Exception tree::

        - VolumetryException
          |- GridMismatchException
          `- NonWatertightInputException
    """
    def __init__(self, message):
        Exception.__init__(self, message)


class GridMismatchException(VolumetryException):
    def __init__(self, message):
        super(GridMismatchException, self).__init__(message)


class NonWatertightInputException(VolumetryException):
    def __init__(self, message):
        super(NonWatertightInputException, self).__init__(message)


def bounds_around(points, margin=None):
    """
    AABB of `points` grown by `margin` (default
    :attr:`~raycollide.settings.VOXEL_MARGIN`).
    """
    if margin is None:
        margin = settings.VOXEL_MARGIN

    lower, upper = aabb(points)
    return lower - margin, upper + margin


def make_grid(bounds, resolution):
    """
    Empty grid covering `bounds`, origin at the lower corner.

    Args:
        bounds (tuple): ``(lower, upper)`` corners.
        resolution (float): Voxel edge in meters.

    Returns:
        obj: :class:`.VoxelGrid`.
    """
    if resolution <= 0:
        raise ValueError("Resolution has to be positive.")

    lower = np.asarray(bounds[0], dtype=np.float64)
    upper = np.asarray(bounds[1], dtype=np.float64)

    # tolerate rounding of exactly aligned bounds
    dims = np.ceil((upper - lower) / resolution - 1e-9).astype(np.int64)
    dims = np.maximum(dims, 1)

    return VoxelGrid(lower, resolution, dims)


def _check_watertight(mesh):
    if len(mesh.edge_triangles) and np.any(mesh.edge_triangles < 0):
        raise NonWatertightInputException(
            "Can't voxelize non-watertight %r." % (mesh,)
        )


def _column_winding(scene, grid, start_x, slab):
    """
    Winding number of voxel centers of z-slab `slab` (slice).
    """
    nx, ny, _ = grid.dims
    ys = grid.axis_centers(1)
    zs = grid.axis_centers(2)[slab]

    yy, zz = np.meshgrid(ys, zs, indexing="ij")
    count = yy.size
    origins = np.column_stack([
        np.full(count, start_x),
        yy.ravel(),
        zz.ravel(),
    ])
    rays = RayBatch(
        origins,
        np.repeat([[1.0, 0.0, 0.0]], count, axis=0),
        np.zeros(count),
        np.full(count, np.inf),
    )

    hits = rt.trace_instances(scene, rays)

    # first voxel whose center lies behind the crossing
    x = start_x + hits.t
    first = np.floor((x - grid.origin[0]) / grid.resolution - 0.5) + 1
    first = np.clip(first, 0, nx).astype(np.int64)

    difference = np.zeros((count, nx + 1), dtype=np.int64)
    np.add.at(
        difference,
        (hits.ray, first),
        np.where(hits.front, 1, -1),
    )
    winding = np.cumsum(difference[:, :nx], axis=1)

    return winding.reshape(ny, len(zs), nx).transpose(2, 0, 1) > 0


def voxelize_scene(scene, grid, threads=None):
    """
    Voxelize all instances of triangle :class:`.SceneIndex` into `grid`.
    """
    occupancy = np.zeros(grid.dims, dtype=bool)
    if scene.top is None:
        return grid.with_occupancy(occupancy)

    start_x = min(scene.world_bounds[0][0], grid.origin[0]) - 1.0
    slab_size = max(1, settings.RAY_CHUNK // max(1, grid.dims[1]))
    slabs = [
        slice(begin, min(begin + slab_size, grid.dims[2]))
        for begin in range(0, grid.dims[2], slab_size)
    ]

    parts = parallel.map_ordered(
        lambda slab: _column_winding(scene, grid, start_x, slab),
        slabs,
        threads,
    )
    for slab, part in zip(slabs, parts):
        occupancy[:, :, slab] = part

    return grid.with_occupancy(occupancy)


def _posed_scene(meshes):
    bvhs = {}
    instances = []
    for index, item in enumerate(meshes):
        mesh, transform = item if isinstance(item, tuple) else (item, np.eye(4))
        _check_watertight(mesh)

        if id(mesh) not in bvhs:
            bvhs[id(mesh)] = build_bvh(mesh)

        instances.append((
            bvhs[id(mesh)],
            transform,
            rt.InstanceTag.obstacle_tag(index),
        ))

    return rt.build_scene_index(instances)


def voxelize_meshes(meshes, resolution, bounds, threads=None):
    """
    Voxelize union of watertight meshes.

    Args:
        meshes (list): :class:`.TriangleMesh` in world frame, or
               ``(mesh, transform)`` pairs.
        resolution (float): Voxel edge in meters.
        bounds (tuple): ``(lower, upper)`` covering all meshes.

    Returns:
        obj: :class:`.VoxelGrid`.

    Raises:
        NonWatertightInputException: For meshes with boundary edges.
    """
    grid = make_grid(bounds, resolution)
    return voxelize_scene(_posed_scene(meshes), grid, threads)


def _link_bvhs(robot):
    return [build_bvh(link.mesh) for link in robot.links]


def voxelize_robot(robot, configs, resolution, bounds, bvhs=None,
                   threads=None):
    """
    Voxelize union of robot link meshes over all `configs`.
    """
    if bvhs is None:
        bvhs = _link_bvhs(robot)

    poses = kinematics.forward_kinematics_batch(configs, robot)
    scene = rt.build_scene_index([
        (bvhs[link], poses.transforms[config, link],
         rt.InstanceTag.robot_tag(config, link))
        for config in range(poses.config_count)
        for link in range(poses.link_count)
    ])

    return voxelize_scene(scene, make_grid(bounds, resolution), threads)


def _sub_box(grid, lower, upper):
    """
    Index ranges of voxels whose centers may lie in ``[lower, upper]``.
    """
    low = np.floor((lower - grid.origin) / grid.resolution - 0.5) + 1
    high = np.floor((upper - grid.origin) / grid.resolution - 0.5) + 1
    low = np.clip(low, 0, grid.dims).astype(np.int64)
    high = np.clip(high, 0, grid.dims).astype(np.int64)

    return tuple(slice(l, h) for l, h in zip(low, high))


def _box_centers(grid, box):
    axes = [
        grid.origin[axis] + (np.arange(box[axis].start, box[axis].stop) + 0.5) *
        grid.resolution
        for axis in range(3)
    ]
    return np.meshgrid(*axes, indexing="ij")


def _mark_capsule(grid, occupancy, start, end, radius):
    lower = np.minimum(start, end) - radius
    upper = np.maximum(start, end) + radius
    box = _sub_box(grid, lower, upper)
    if any(s.start >= s.stop for s in box):
        return

    x, y, z = _box_centers(grid, box)
    axis = end - start
    length2 = float(axis @ axis)

    rx, ry, rz = x - start[0], y - start[1], z - start[2]
    if length2 > 0:
        s = np.clip((rx * axis[0] + ry * axis[1] + rz * axis[2]) / length2,
                    0.0, 1.0)
        rx = rx - s * axis[0]
        ry = ry - s * axis[1]
        rz = rz - s * axis[2]

    occupancy[box] |= rx * rx + ry * ry + rz * rz <= radius * radius


def voxelize_spheres(spheres, resolution, bounds):
    """
    Voxelize union of spheres analytically.

    Args:
        spheres (np.ndarray): ``(N, 4)`` spheres ``x, y, z, r``.

    Returns:
        obj: :class:`.VoxelGrid`.
    """
    grid = make_grid(bounds, resolution)
    occupancy = np.zeros(grid.dims, dtype=bool)

    for sphere in np.asarray(spheres, dtype=np.float64).reshape(-1, 4):
        _mark_capsule(grid, occupancy, sphere[:3], sphere[:3], sphere[3])

    return grid.with_occupancy(occupancy)


def voxelize_swept_spheres(curves, resolution, bounds, tolerance=None):
    """
    Voxelize union of swept sphere curves. Piecewise linear curves are exact,
    splines are flattened with `tolerance`.

    Returns:
        obj: :class:`.VoxelGrid`.
    """
    grid = make_grid(bounds, resolution)
    occupancy = np.zeros(grid.dims, dtype=bool)

    for curve in curves:
        starts, ends = rt.curve_segments(curve, tolerance)
        for start, end in zip(starts, ends):
            _mark_capsule(grid, occupancy, start, end, curve.radius)

    return grid.with_occupancy(occupancy)


def swept_truth_grid(robot, trajectory, resolution, bounds, poses=None,
                     converge=True, threads=None):
    """
    Voxelized swept volume of the robot meshes: union over `poses` evenly
    resampled configurations.

    With `converge`, the pose count is refined ``K -> 2K - 1`` (all previous
    poses are kept, so the occupancy only grows) until the relative change
    drops under :attr:`~raycollide.settings.TRUTH_CONVERGENCE` or the count
    exceeds :attr:`~raycollide.settings.TRUTH_MAX_POSES`.

    Args:
        robot (obj): :class:`.RobotModel`.
        trajectory (np.ndarray): ``(m, dof)`` waypoints.
        resolution (float): Voxel edge.
        bounds (tuple): Grid bounds.
        poses (int, default None): Initial pose count ``K >= 2``,
              :attr:`~raycollide.settings.TRUTH_POSES` by default.
        converge (bool, default True): Refine until converged.

    Returns:
        obj: :class:`.VoxelGrid`.
    """
    if poses is None:
        poses = settings.TRUTH_POSES
    if poses < 2:
        raise ValueError("At least two poses are needed.")

    bvhs = _link_bvhs(robot)
    configs = kinematics.resample_trajectory(trajectory, poses)
    grid = voxelize_robot(robot, configs, resolution, bounds, bvhs, threads)

    change = float("inf")
    while converge:
        refined = 2 * poses - 1
        if refined > settings.TRUTH_MAX_POSES:
            logger.warning(
                "Swept truth grid not converged at %d poses (relative "
                "change %.4g).", poses, change
            )
            break

        configs = kinematics.resample_trajectory(trajectory, refined)[1::2]
        added = voxelize_robot(robot, configs, resolution, bounds, bvhs,
                               threads)
        occupancy = grid.occupancy | added.occupancy

        before = grid.count()
        change = (np.count_nonzero(occupancy) - before) / max(before, 1)
        grid = grid.with_occupancy(occupancy)
        poses = refined

        logger.debug("Truth grid at %d poses, change %.4g", poses, change)
        if change < settings.TRUTH_CONVERGENCE:
            break

    return grid


def coverage(approx, truth):
    """
    Precision and recall of `approx` against `truth`. Empty denominators give
    1.0.

    Raises:
        GridMismatchException: If the grids have different layout.
    """
    if not approx.same_layout(truth):
        raise GridMismatchException(
            "Grids differ: %r/%r/%r vs %r/%r/%r" % (
                approx.origin, approx.resolution, approx.dims,
                truth.origin, truth.resolution, truth.dims,
            )
        )

    true_positive = int(np.count_nonzero(approx.occupancy & truth.occupancy))
    approx_total = approx.count()
    truth_total = truth.count()

    return CoverageMetrics(
        precision=true_positive / approx_total if approx_total else 1.0,
        recall=true_positive / truth_total if truth_total else 1.0,
        true_positive=true_positive,
        approx_total=approx_total,
        truth_total=truth_total,
    )


def save_grid(grid, path):
    header = _HEADER.pack(
        GRID_MAGIC,
        GRID_VERSION,
        grid.origin[0],
        grid.origin[1],
        grid.origin[2],
        grid.resolution,
        *grid.dims
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.packbits(grid.occupancy.ravel()).tobytes())


def load_grid(path):
    """
    Read grid stored by :func:`save_grid`.

    Raises:
        VolumetryException: For unknown format.
    """
    with open(path, "rb") as f:
        data = f.read()

    if len(data) < _HEADER.size:
        raise VolumetryException("`%s` is too short." % path)

    magic, version, ox, oy, oz, resolution, nx, ny, nz = _HEADER.unpack_from(
        data
    )
    if magic != GRID_MAGIC or version != GRID_VERSION:
        raise VolumetryException("`%s` is not a voxel grid." % path)

    count = nx * ny * nz
    bits = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    if len(bits) != math.ceil(count / 8):
        raise VolumetryException("Body of `%s` is truncated." % path)

    occupancy = np.unpackbits(bits, count=count).astype(bool)
    return VoxelGrid((ox, oy, oz), resolution, (nx, ny, nz), occupancy)


def grid_summary(grid):
    """
    Returns:
        dict: JSON friendly occupancy summary.
    """
    return {
        "origin": grid.origin.tolist(),
        "resolution": grid.resolution,
        "dims": list(grid.dims),
        "occupied": grid.count(),
        "volume": grid.volume,
    }


def save_summary(grid, path):
    with open(path, "w") as f:
        json.dump(grid_summary(grid), f, indent=4)
