#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Discrete pose collision detection of robot meshes against obstacle meshes.

Workflow
========

Obstacles and robot are precomputed once::

    scene = build_scene([load_mesh("shelf.stl"), load_mesh("box.stl")])
    robot_index = prepare_robot(robot)

and then any number of configuration batches can be checked::

    result = detect(configs, robot_index, scene, variant="two-way")
    result.in_collision  # (K,) bool

:func:`detect` runs batch forward kinematics, OBB broad phase, stream
compaction of the surviving ``(config, link)`` pairs and one of the narrow
phase variants:

    - :func:`detect_obs_to_robot` traces obstacle edges against posed links,
    - :func:`detect_robot_to_obs` traces posed link edges against obstacles,
    - :func:`detect_two_way` is OR of both and is exact for penetrating
      collisions of watertight meshes.

Each variant also traces one containment ray from the interior point of the
source mesh, which catches meshes fully inside each other.

There is also defined exception tree - see :class:`CollisionSceneException`
doc-string for details.
"""
import logging
from collections import namedtuple

import numpy as np

from . import rt
from . import settings
from . import kinematics
from .bvh import build_bvh
from .mesh import compute_obb
from .mesh import load_mesh
from .mesh import obb_overlap_batch
from .geometry import normalize
from .datastructures import RayBatch
from .datastructures import ObbBatch
from .datastructures import DcdResult


# Variables ===================================================================
logger = logging.getLogger(__name__)

#: Direction of containment rays.
CONTAINMENT_DIRECTION = np.array([1.0, 0.0, 0.0])

#: Number of triangles tried by interior point search.
_INTERIOR_CANDIDATES = 64


class Variant:
    """
    Enum of narrow phase variants.
    """
    OBS2ROB = "obs2rob"
    ROB2OBS = "rob2obs"
    TWO_WAY = "two-way"

    ALL = [OBS2ROB, ROB2OBS, TWO_WAY]


# Structures ==================================================================
class MeshAsset(namedtuple("MeshAsset", ["mesh",
                                         "bvh",
                                         "obb",
                                         "interior",
                                         "edge_origins",
                                         "edge_directions",
                                         "edge_lengths"])):
    """
    Precomputed data of one mesh (obstacle or robot link), in the mesh frame.

    Attributes:
        mesh (obj): :class:`.TriangleMesh`.
        bvh (obj): Triangle :class:`.Bvh`.
        obb (obj): :class:`.Obb`.
        interior (np.ndarray): ``(3,)`` point strictly inside the mesh.
        edge_origins (np.ndarray): ``(E, 3)`` edge ray origins.
        edge_directions (np.ndarray): ``(E, 3)`` unit edge directions.
        edge_lengths (np.ndarray): ``(E,)`` edge lengths (``t_max``).
    """
    @property
    def edge_rays(self):
        return RayBatch(
            self.edge_origins,
            self.edge_directions,
            np.zeros(len(self.edge_lengths)),
            self.edge_lengths,
        )


class CollisionScene(namedtuple("CollisionScene", ["obstacles",
                                                   "index",
                                                   "obbs",
                                                   "directed"])):
    """
    Precomputed obstacles.

    Attributes:
        obstacles (tuple): :class:`MeshAsset` per obstacle.
        index (obj): :class:`.SceneIndex` of the obstacles, instance ``i`` is
              obstacle ``i``.
        obbs (obj): :class:`.ObbBatch` of shape ``(O,)``.
        directed (tuple): :class:`.DirectedEdgeSet` per obstacle, None until
                 :func:`raycollide.ccd.orient_scene` is called.
    """
    @property
    def size(self):
        return len(self.obstacles)


class RobotIndex(namedtuple("RobotIndex", ["robot", "links"])):
    """
    Robot with precomputed link data.

    Attributes:
        robot (obj): :class:`.RobotModel`.
        links (tuple): :class:`MeshAsset` per link.
    """
    pass


class CompactedLinks(namedtuple("CompactedLinks", ["config",
                                                   "link",
                                                   "transforms"])):
    """
    Result of stream compaction: ``(config, link)`` pairs which passed the
    broad phase, config-major.

    Attributes:
        config (np.ndarray): ``(M,)``
        link (np.ndarray): ``(M,)``
        transforms (np.ndarray): ``(M, 4, 4)`` link world transforms.
    """
    @property
    def size(self):
        return len(self.config)


# Functions & objects =========================================================
class CollisionSceneException(Exception):
    """
    Exception tree::

        - CollisionSceneException
          `- InteriorPointException
    """
    def __init__(self, message):
        Exception.__init__(self, message)


class InteriorPointException(CollisionSceneException):
    def __init__(self, message):
        super(InteriorPointException, self).__init__(message)


def containment_rays(points):
    """
    Unbounded rays from `points` along :attr:`CONTAINMENT_DIRECTION`.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    return RayBatch(
        points,
        np.repeat(CONTAINMENT_DIRECTION[None], len(points), axis=0),
        np.zeros(len(points)),
        np.full(len(points), np.inf),
    )


def is_inside(bvh, points):
    """
    Parity containment test against single mesh.

    Returns:
        np.ndarray: ``(N,)`` bool.
    """
    rays = containment_rays(points)
    hits = rt.trace_bvh(bvh, rays)

    back = np.bincount(hits.ray, weights=~hits.front, minlength=rays.size)
    front = np.bincount(hits.ray, weights=hits.front, minlength=rays.size)

    return back > front


def interior_point(mesh, bvh):
    """
    Find point strictly inside `mesh`.

    Ray is cast from the centroid of a triangle against its normal, the
    midpoint to the first hit is taken and verified by parity. Triangles are
    tried from the largest.

    Raises:
        InteriorPointException: If no candidate passes.
    """
    areas = mesh.areas
    normals = normalize(mesh.normals)
    centroids = mesh.corners.mean(axis=1)
    scale = max(float(np.ptp(mesh.vertices, axis=0).max()), 1e-9)

    for face in np.argsort(-areas, kind="stable")[:_INTERIOR_CANDIDATES]:
        if areas[face] <= 0:
            break

        ray = RayBatch(
            centroids[face][None],
            -normals[face][None],
            np.array([1e-9 * scale]),
            np.array([np.inf]),
        )
        hits = rt.trace_bvh(bvh, ray)
        hits = hits.take(hits.primitive != face)
        if not hits.size:
            continue

        depth = float(hits.t.min())
        point = centroids[face] - normals[face] * 0.5 * depth
        if is_inside(bvh, point)[0]:
            return point

    raise InteriorPointException("Can't find interior point of %r." % (mesh,))


def make_asset(mesh):
    """
    Precompute :class:`MeshAsset` of a watertight mesh.
    """
    bvh = build_bvh(mesh)
    starts = mesh.vertices[mesh.edges[:, 0]]
    delta = mesh.vertices[mesh.edges[:, 1]] - starts
    lengths = np.linalg.norm(delta, axis=1)

    return MeshAsset(
        mesh=mesh,
        bvh=bvh,
        obb=compute_obb(mesh),
        interior=interior_point(mesh, bvh),
        edge_origins=starts,
        edge_directions=delta / lengths[:, None],
        edge_lengths=lengths,
    )


def build_scene(meshes):
    """
    Precompute obstacles.

    Args:
        meshes (list): Watertight :class:`.TriangleMesh` obstacles in world
               frame.

    Returns:
        obj: :class:`CollisionScene`.

    Raises:
        InteriorPointException: For pathological mesh.
    """
    assets = tuple(make_asset(mesh) for mesh in meshes)
    index = rt.build_scene_index([
        (asset.bvh, np.eye(4), rt.InstanceTag.obstacle_tag(i))
        for i, asset in enumerate(assets)
    ])

    logger.info(
        "Built scene of %d obstacles, %d triangles, %d edges",
        len(assets),
        sum(len(a.mesh.triangles) for a in assets),
        sum(len(a.mesh.edges) for a in assets),
    )

    return CollisionScene(
        obstacles=assets,
        index=index,
        obbs=ObbBatch.from_obbs([asset.obb for asset in assets]),
        directed=None,
    )


def load_scene(paths):
    """
    :func:`build_scene` of meshes loaded from `paths`.
    """
    return build_scene([load_mesh(path) for path in paths])


def prepare_robot(robot):
    """
    Precompute BVHs, edge rays and interior points of robot links.

    Returns:
        obj: :class:`RobotIndex`. Passing :class:`RobotIndex` returns it.
    """
    if isinstance(robot, RobotIndex):
        return robot

    return RobotIndex(
        robot=robot,
        links=tuple(make_asset(link.mesh) for link in robot.links),
    )


def broad_phase(scene, robot_obbs, detail=False):
    """
    OBB broad phase.

    Args:
        scene (obj): :class:`CollisionScene`.
        robot_obbs (obj): :class:`.ObbBatch` of shape ``(K, L)``.
        detail (bool, default False): Return per obstacle mask.

    Returns:
        np.ndarray: ``(K, L)`` mask, True where the link OBB overlaps any \
                    obstacle OBB, or ``(K, L, O)`` pair mask with `detail`.
    """
    count, links = robot_obbs.shape
    if not scene.size:
        shape = (count, links, 0) if detail else (count, links)
        return np.zeros(shape, dtype=bool)

    pairs = obb_overlap_batch(
        robot_obbs.centers[:, :, None],
        robot_obbs.rotations[:, :, None],
        robot_obbs.half_extents[:, :, None],
        scene.obbs.centers,
        scene.obbs.rotations,
        scene.obbs.half_extents,
    )
    if detail:
        return pairs

    return pairs.any(axis=2)


def compact(mask, poses):
    """
    Stream compaction of the broad phase mask.

    Args:
        mask (np.ndarray): ``(K, L)`` bool.
        poses (obj): :class:`.PoseBatch`.

    Returns:
        obj: :class:`CompactedLinks` in config-major, link-minor order.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != poses.transforms.shape[:2]:
        raise ValueError("Mask %r doesn't match poses %r." % (
            mask.shape,
            poses.transforms.shape[:2],
        ))

    config, link = np.nonzero(mask)
    return CompactedLinks(config, link, poses.transforms[config, link])


class _Collector(object):
    """
    Collects per config (and optionally per link / obstacle) flags.
    """
    def __init__(self, config_count, link_count, obstacle_count, detail):
        self.flags = np.zeros(config_count, dtype=bool)
        self.detail = None
        if detail:
            self.detail = np.zeros(
                (config_count, link_count, obstacle_count), dtype=bool
            )

    def mark(self, config, link, obstacle):
        self.flags[config] = True
        if self.detail is not None:
            self.detail[config, link, obstacle] = True

    @property
    def early_exit(self):
        return self.detail is None

    def result(self):
        return DcdResult(self.flags, self.detail)


def detect_obs_to_robot(scene, compacted, robot_index, config_count,
                        detail=False, collector=None):
    """
    Trace obstacle edges and obstacle containment rays against all compacted
    link instances in one :class:`.SceneIndex`.

    Args:
        scene (obj): :class:`CollisionScene`.
        compacted (obj): :class:`CompactedLinks`.
        robot_index (obj): :class:`RobotIndex`.
        config_count (int): Number of configurations in the batch.
        detail (bool, default False): Fill per link / obstacle detail and
               don't skip configurations already in collision.

    Returns:
        obj: :class:`.DcdResult`.
    """
    if collector is None:
        collector = _Collector(config_count, len(robot_index.links),
                               scene.size, detail)
    if not compacted.size or not scene.size:
        return collector.result()

    links = rt.build_scene_index([
        (robot_index.links[l].bvh, transform, rt.InstanceTag.robot_tag(k, l))
        for k, l, transform in zip(compacted.config, compacted.link,
                                   compacted.transforms)
    ])

    rays = RayBatch(
        np.concatenate([a.edge_origins for a in scene.obstacles] +
                       [np.stack([a.interior for a in scene.obstacles])]),
        np.concatenate(
            [a.edge_directions for a in scene.obstacles] +
            [np.repeat(CONTAINMENT_DIRECTION[None], scene.size, axis=0)]
        ),
        np.zeros(sum(len(a.edge_lengths) for a in scene.obstacles) +
                 scene.size),
        np.concatenate([a.edge_lengths for a in scene.obstacles] +
                       [np.full(scene.size, np.inf)]),
    )
    owner = np.concatenate([
        np.full(len(a.edge_lengths), i) for i, a in enumerate(scene.obstacles)
    ] + [np.arange(scene.size)])
    containment = np.zeros(rays.size, dtype=bool)
    containment[-scene.size:] = True

    for begin in range(0, rays.size, settings.RAY_CHUNK):
        chunk = np.arange(begin, min(begin + settings.RAY_CHUNK, rays.size))

        active = np.ones(links.size, dtype=bool)
        if collector.early_exit:
            active = ~collector.flags[compacted.config]
            if not active.any():
                break

        chunk_rays = rays.take(chunk)
        edges = ~containment[chunk]

        hits = rt.trace_instances(links, chunk_rays.take(edges), active)
        local = np.flatnonzero(edges)[hits.ray]
        collector.mark(
            compacted.config[hits.instance],
            compacted.link[hits.instance],
            owner[chunk[local]],
        )

        inside = np.flatnonzero(containment[chunk])
        if inside.size:
            ray, instance, front, back = rt.count_faces_batch(
                links, chunk_rays.take(inside), active
            )
            hit = back > front
            collector.mark(
                compacted.config[instance[hit]],
                compacted.link[instance[hit]],
                owner[chunk[inside[ray[hit]]]],
            )

    return collector.result()


def _posed_rays(asset, transforms):
    """
    Edge rays of `asset` posed by each of `transforms`, entry-major.
    """
    rot = transforms[:, :3, :3]
    origins = np.einsum("mij,ej->mei", rot, asset.edge_origins) + \
        transforms[:, None, :3, 3]
    directions = np.einsum("mij,ej->mei", rot, asset.edge_directions)
    count = len(transforms) * len(asset.edge_lengths)

    return RayBatch(
        origins.reshape(-1, 3),
        normalize(directions.reshape(-1, 3)),
        np.zeros(count),
        np.tile(asset.edge_lengths, len(transforms)),
    )


def detect_robot_to_obs(scene, compacted, robot_index, config_count,
                        detail=False, collector=None):
    """
    Trace posed link edges and link containment rays against the obstacles.

    Args:
        scene (obj): :class:`CollisionScene`.
        compacted (obj): :class:`CompactedLinks`.
        robot_index (obj): :class:`RobotIndex`.
        config_count (int): Number of configurations in the batch.
        detail (bool, default False): Fill per link / obstacle detail.

    Returns:
        obj: :class:`.DcdResult`.
    """
    if collector is None:
        collector = _Collector(config_count, len(robot_index.links),
                               scene.size, detail)
    if not compacted.size or not scene.size:
        return collector.result()

    for link, asset in enumerate(robot_index.links):
        entries = np.flatnonzero(compacted.link == link)
        per_chunk = max(1, settings.RAY_CHUNK // max(1, len(asset.edge_lengths)))

        for begin in range(0, len(entries), per_chunk):
            chunk = entries[begin:begin + per_chunk]
            if collector.early_exit:
                chunk = chunk[~collector.flags[compacted.config[chunk]]]
                if not chunk.size:
                    continue

            transforms = compacted.transforms[chunk]
            rays = _posed_rays(asset, transforms)
            hits = rt.trace_instances(scene.index, rays)
            entry = chunk[hits.ray // len(asset.edge_lengths)]
            collector.mark(compacted.config[entry], link, hits.instance)

            interiors = np.einsum(
                "mij,j->mi", transforms[:, :3, :3], asset.interior
            ) + transforms[:, :3, 3]
            ray, instance, front, back = rt.count_faces_batch(
                scene.index, containment_rays(interiors)
            )
            hit = back > front
            collector.mark(
                compacted.config[chunk[ray[hit]]], link, instance[hit]
            )

    return collector.result()


def detect_two_way(scene, compacted, robot_index, config_count, detail=False):
    """
    Per configuration OR of :func:`detect_obs_to_robot` and
    :func:`detect_robot_to_obs`. Configurations flagged by the first pass are
    not traced again unless `detail` is requested.

    Returns:
        obj: :class:`.DcdResult`.
    """
    collector = _Collector(config_count, len(robot_index.links), scene.size,
                           detail)
    detect_obs_to_robot(scene, compacted, robot_index, config_count,
                        detail, collector)
    detect_robot_to_obs(scene, compacted, robot_index, config_count,
                        detail, collector)

    return collector.result()


_NARROW_PHASE = {
    Variant.OBS2ROB: detect_obs_to_robot,
    Variant.ROB2OBS: detect_robot_to_obs,
    Variant.TWO_WAY: detect_two_way,
}


def _detect_batch(configs, robot_index, scene, variant, use_broad_phase,
                  detail):
    robot = robot_index.robot
    poses = kinematics.forward_kinematics_batch(configs, robot)

    if use_broad_phase:
        obbs = kinematics.transform_robot_obbs(poses, robot)
        mask = broad_phase(scene, obbs)
    else:
        mask = np.ones(poses.transforms.shape[:2], dtype=bool)

    compacted = compact(mask, poses)
    logger.debug(
        "Batch of %d configs: %d of %d links passed broad phase",
        len(configs),
        compacted.size,
        mask.size,
    )

    return _NARROW_PHASE[variant](
        scene, compacted, robot_index, len(configs), detail
    )


def detect(configs, robot, scene, variant=Variant.TWO_WAY, broad_phase=True,
           batch_size=None, detail=False):
    """
    Check configurations for collisions.

    Args:
        configs (np.ndarray): ``(K, dof)`` joint values.
        robot (obj): :class:`.RobotModel` or :class:`RobotIndex`.
        scene (obj): :class:`CollisionScene`.
        variant (str, default "two-way"): One of :class:`Variant`.
        broad_phase (bool, default True): Use OBB broad phase. Doesn't change
                    the result, only the runtime.
        batch_size (int, default None): Process `configs` in batches of this
                   size. Doesn't change the result.
        detail (bool, default False): Return ``(K, L, O)`` detail.

    Returns:
        obj: :class:`.DcdResult`.

    Raises:
        ValueError: For unknown `variant`.
        JointLimitException: For configurations out of limits.
    """
    if variant not in _NARROW_PHASE:
        raise ValueError("Unknown variant `%s`." % variant)

    robot_index = prepare_robot(robot)
    configs = np.asarray(configs, dtype=np.float64)
    if configs.ndim == 1:
        configs = configs.reshape(-1, robot_index.robot.dof)

    if batch_size is None or batch_size >= len(configs):
        batch_size = max(len(configs), 1)
    if batch_size < 1:
        raise ValueError("`batch_size` has to be at least 1.")

    result = None
    for begin in range(0, len(configs), batch_size):
        part = _detect_batch(
            configs[begin:begin + batch_size],
            robot_index,
            scene,
            variant,
            broad_phase,
            detail,
        )
        result = part if result is None else _concatenate(result, part)

    if result is None:
        detail_array = None
        if detail:
            detail_array = np.zeros(
                (0, len(robot_index.links), scene.size), dtype=bool
            )
        result = DcdResult(np.zeros(0, dtype=bool), detail_array)

    return result


def _concatenate(first, second):
    detail = None
    if first.detail is not None:
        detail = np.concatenate([first.detail, second.detail])

    return DcdResult(
        np.concatenate([first.in_collision, second.in_collision]),
        detail
    )

