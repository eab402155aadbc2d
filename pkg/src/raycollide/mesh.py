#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Triangle mesh handling.

Meshes
======

All meshes used by the package are closed, 2-manifold and outward oriented.
They are built by::

    make_mesh(vertices, triangles)
    load_mesh(path)

Both functions build the unique edge list and raise
:class:`WatertightnessException` when the topology is broken. The mesh itself
is never repaired.

Bounding boxes
==============

:func:`compute_obb` fits an oriented box, :func:`obb_overlap` implements the
separating axis test. :func:`obb_overlap_batch` is the broadcasting version
used by the broad phase.

Penetration bound
=================

Swept sphere CCD can't see a triangle pierced only through its face. Depth of
such miss is bounded by :func:`max_penetration_bound`, and
:func:`split_triangles` refines the mesh until the bound is small enough.

There is also defined exception tree - see :class:`MeshException` doc-string
for details.
"""
import math
import logging

import numpy as np
import trimesh

from . import settings
from .datastructures import Obb
from .datastructures import TriangleMesh


# Variables ===================================================================
logger = logging.getLogger(__name__)

#: Number of the largest triangles used as OBB candidate frames.
_OBB_CANDIDATE_TRIANGLES = 8


# Functions & objects =========================================================
class MeshException(Exception):
    """
    Exception tree::

        - MeshException
          |- MeshParseException
          |- WatertightnessException
          `- SplitLimitException
    """
    def __init__(self, message):
        Exception.__init__(self, message)


class MeshParseException(MeshException):
    def __init__(self, message):
        super(MeshParseException, self).__init__(message)


class WatertightnessException(MeshException):
    """
    Attributes:
        edges (np.ndarray): ``(N, 2)`` offending vertex pairs.
    """
    def __init__(self, message, edges=None):
        super(WatertightnessException, self).__init__(message)
        self.edges = np.zeros((0, 2), dtype=np.int64) if edges is None else edges


class SplitLimitException(MeshException):
    """
    Attributes:
        residual (float): Largest incircle radius left after the last
                  iteration.
    """
    def __init__(self, message, residual):
        super(SplitLimitException, self).__init__(message)
        self.residual = residual


def _directed_edges(triangles):
    return triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)


def _unique_edges(triangles):
    """
    Returns:
        tuple: ``(edges, inverse, counts)``, where `inverse` maps each of the
        ``3 * F`` triangle sides to the unique edge.
    """
    sides = np.sort(_directed_edges(triangles), axis=1)
    edges, inverse, counts = np.unique(
        sides,
        axis=0,
        return_inverse=True,
        return_counts=True,
    )

    return edges, inverse.reshape(-1), counts


def validation_report(vertices, triangles):
    """
    Check topology of the triangle soup.

    Args:
        vertices (np.ndarray): ``(V, 3)`` positions.
        triangles (np.ndarray): ``(F, 3)`` vertex indices.

    Returns:
        dict: ``watertight`` flag, lists of ``boundary_edges``,
        ``nonmanifold_edges``, ``inconsistent_edges``, ``degenerate_triangles``
        and the signed ``volume``. Can be dumped to JSON as it is.
    """
    vertices = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)

    degenerate = np.flatnonzero(
        (triangles[:, 0] == triangles[:, 1]) |
        (triangles[:, 1] == triangles[:, 2]) |
        (triangles[:, 2] == triangles[:, 0])
    )

    edges, _, counts = _unique_edges(triangles)
    directed, directed_counts = np.unique(
        _directed_edges(triangles),
        axis=0,
        return_counts=True
    )

    corners = vertices[triangles]
    volume = np.einsum(
        "ij,ij->i",
        corners[:, 0],
        np.cross(corners[:, 1], corners[:, 2])
    ).sum() / 6.0

    report = {
        "vertices": len(vertices),
        "triangles": len(triangles),
        "edges": len(edges),
        "boundary_edges": edges[counts == 1].tolist(),
        "nonmanifold_edges": edges[counts > 2].tolist(),
        "inconsistent_edges": directed[directed_counts > 1].tolist(),
        "degenerate_triangles": degenerate.tolist(),
        "volume": float(volume),
    }
    report["watertight"] = not (
        report["boundary_edges"] or
        report["nonmanifold_edges"] or
        report["inconsistent_edges"] or
        report["degenerate_triangles"] or
        len(triangles) == 0
    )

    return report


def make_mesh(vertices, triangles, validate=True):
    """
    Build :class:`.TriangleMesh` with its edge list.

    Args:
        vertices (np.ndarray): ``(V, 3)`` positions in meters.
        triangles (np.ndarray): ``(F, 3)`` outward oriented vertex indices.
        validate (bool, default True): Raise for non-watertight input.

    Returns:
        obj: :class:`.TriangleMesh` with read-only arrays.

    Raises:
        WatertightnessException: If there is a boundary, non-manifold or
                                 inconsistently oriented edge, or the mesh is
                                 oriented inwards.
    """
    vertices = np.array(vertices, dtype=np.float64).reshape(-1, 3)
    triangles = np.array(triangles, dtype=np.int64).reshape(-1, 3)

    if validate:
        report = validation_report(vertices, triangles)
        if not report["watertight"]:
            bad = (
                report["boundary_edges"] +
                report["nonmanifold_edges"] +
                report["inconsistent_edges"]
            )
            raise WatertightnessException(
                "Mesh is not watertight: %d boundary, %d non-manifold, "
                "%d inconsistent edges, %d degenerate triangles: %s" % (
                    len(report["boundary_edges"]),
                    len(report["nonmanifold_edges"]),
                    len(report["inconsistent_edges"]),
                    len(report["degenerate_triangles"]),
                    bad[:10],
                ),
                np.array(bad, dtype=np.int64).reshape(-1, 2)
            )

        if report["volume"] <= 0:
            raise WatertightnessException(
                "Mesh is oriented inwards (signed volume %g)." % report["volume"]
            )

    edges, inverse, counts = _unique_edges(triangles)

    # two adjacent triangles per edge, stable order by triangle index
    sides_faces = np.repeat(np.arange(len(triangles)), 3)
    order = np.argsort(inverse, kind="stable")
    if np.all(counts == 2):
        edge_triangles = sides_faces[order].reshape(-1, 2)
    else:
        edge_triangles = np.full((len(edges), 2), -1, dtype=np.int64)
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        edge_triangles[:, 0] = sides_faces[order][starts]
        second = counts > 1
        edge_triangles[second, 1] = sides_faces[order][starts[second] + 1]

    for array in (vertices, triangles, edges, edge_triangles):
        array.setflags(write=False)

    return TriangleMesh(
        vertices=vertices,
        triangles=triangles,
        edges=edges,
        edge_triangles=edge_triangles,
    )


def from_trimesh(mesh, validate=True):
    """
    Convert :class:`trimesh.Trimesh` to :class:`.TriangleMesh`.
    """
    return make_mesh(
        np.asarray(mesh.vertices),
        np.asarray(mesh.faces),
        validate=validate,
    )


def load_mesh(path):
    """
    Load and validate mesh from file. Format is guessed from the suffix by
    :func:`trimesh.load` (``.obj``, ``.stl``, ``.ply``, ``.off``, ..), polygons
    are triangulated and duplicate vertices merged.

    Args:
        path (str): Path to the mesh file. Units are meters.

    Returns:
        obj: :class:`.TriangleMesh`.

    Raises:
        MeshParseException: If the file can't be read.
        WatertightnessException: If the mesh is not watertight.
    """
    try:
        loaded = trimesh.load(path, force="mesh", process=True)
    except Exception as e:
        raise MeshParseException("Can't parse `%s`: %s" % (path, e)) from e

    if not isinstance(loaded, trimesh.Trimesh) or not len(loaded.faces):
        raise MeshParseException("`%s` doesn't contain any triangles." % path)

    mesh = from_trimesh(loaded)
    logger.info("Loaded %s from %s", mesh, path)

    return mesh


def _frame_from_axes(first, second):
    first = first / np.linalg.norm(first)
    second = second - first * np.dot(first, second)
    second = second / np.linalg.norm(second)

    return np.column_stack([first, second, np.cross(first, second)])


def _pca_frame(points):
    centered = points - points.mean(axis=0)
    _, vectors = np.linalg.eigh(centered.T @ centered)
    frame = vectors[:, ::-1]

    if np.linalg.det(frame) < 0:
        frame[:, 2] *= -1

    return frame


def _fit_in_frame(points, frame):
    local = points @ frame
    lower = local.min(axis=0)
    upper = local.max(axis=0)

    half = np.maximum(0.5 * (upper - lower), settings.OBB_MIN_HALF_EXTENT)
    center = frame @ (0.5 * (lower + upper))

    return Obb(center=center, half_extents=half, rotation=frame)


def obb_from_points(points, frames=()):
    """
    Fit oriented box around `points`.

    The principal axes frame is always tried first, other `frames` are used
    only when they give strictly smaller box.

    Args:
        points (np.ndarray): ``(N, 3)`` points, ``N >= 1``.
        frames (list): Additional candidate ``(3, 3)`` rotation matrices.

    Returns:
        obj: :class:`.Obb`.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if not len(points):
        raise ValueError("Can't fit OBB to empty point set.")

    best = _fit_in_frame(points, _pca_frame(points))
    for frame in frames:
        candidate = _fit_in_frame(points, frame)
        if candidate.volume < best.volume:
            best = candidate

    return best


def _candidate_frames(mesh):
    frames = [np.eye(3)]

    areas = mesh.areas
    normals = mesh.normals
    corners = mesh.corners
    largest = np.argsort(-areas, kind="stable")[:_OBB_CANDIDATE_TRIANGLES]

    for face in largest:
        if areas[face] <= 0:
            continue

        for k in range(3):
            edge = corners[face, (k + 1) % 3] - corners[face, k]
            if np.linalg.norm(edge) > 0:
                frames.append(_frame_from_axes(normals[face], edge))

    return frames


def compute_obb(mesh):
    """
    Oriented bounding box of the `mesh`.

    Principal component frame is compared with the world axes and frames given
    by the sides of the largest triangles, smallest box wins. Flat or
    collinear meshes get half extents clamped to
    :attr:`~raycollide.settings.OBB_MIN_HALF_EXTENT`.

    Args:
        mesh (obj): :class:`.TriangleMesh`.

    Returns:
        obj: :class:`.Obb` containing all vertices.
    """
    return obb_from_points(mesh.vertices, _candidate_frames(mesh))


def obb_overlap_batch(centers_a, rotations_a, half_a,
                      centers_b, rotations_b, half_b, epsilon=None):
    """
    Separating axis test of broadcastable OBB arrays.

    Args:
        centers_a (np.ndarray): ``(..., 3)``
        rotations_a (np.ndarray): ``(..., 3, 3)``
        half_a (np.ndarray): ``(..., 3)``
        centers_b (np.ndarray): ``(..., 3)``
        rotations_b (np.ndarray): ``(..., 3, 3)``
        half_b (np.ndarray): ``(..., 3)``
        epsilon (float, default None): Inflation of half extents,
                :attr:`~raycollide.settings.OBB_EPSILON` by default.

    Returns:
        np.ndarray: Broadcast shaped bool array, False where separating axis
        exists.
    """
    if epsilon is None:
        epsilon = settings.OBB_EPSILON

    a = np.asarray(half_a, dtype=np.float64) + epsilon
    b = np.asarray(half_b, dtype=np.float64) + epsilon

    # B expressed in the frame of A
    rot = np.einsum("...ki,...kj->...ij", rotations_a, rotations_b)
    t = np.einsum(
        "...ki,...k->...i",
        rotations_a,
        np.asarray(centers_b) - np.asarray(centers_a)
    )
    abs_rot = np.abs(rot) + 1e-12

    separated = np.zeros(np.broadcast_shapes(rot.shape[:-2], a.shape[:-1],
                                             b.shape[:-1]), dtype=bool)

    for i in range(3):
        radius = a[..., i] + np.einsum("...j,...j->...", b, abs_rot[..., i, :])
        separated |= np.abs(t[..., i]) > radius

    for j in range(3):
        radius = np.einsum("...i,...i->...", a, abs_rot[..., :, j]) + b[..., j]
        projected = np.einsum("...i,...i->...", t, rot[..., :, j])
        separated |= np.abs(projected) > radius

    for i in range(3):
        i1, i2 = (i + 1) % 3, (i + 2) % 3
        for j in range(3):
            j1, j2 = (j + 1) % 3, (j + 2) % 3

            radius = (
                a[..., i1] * abs_rot[..., i2, j] +
                a[..., i2] * abs_rot[..., i1, j] +
                b[..., j1] * abs_rot[..., i, j2] +
                b[..., j2] * abs_rot[..., i, j1]
            )
            projected = t[..., i2] * rot[..., i1, j] - \
                t[..., i1] * rot[..., i2, j]

            separated |= np.abs(projected) > radius

    return ~separated


def _obb_key(obb):
    return tuple(np.concatenate([
        obb.center,
        obb.half_extents,
        np.asarray(obb.rotation).ravel(),
    ]))


def obb_overlap(a, b):
    """
    15 axis separating axis test of two :class:`.Obb`.

    Half extents are inflated by :attr:`~raycollide.settings.OBB_EPSILON`.
    Boxes are tested in a canonical order, so the result doesn't depend on the
    order of the arguments.

    Returns:
        bool: False only if separating axis exists.
    """
    if _obb_key(b) < _obb_key(a):
        a, b = b, a

    return bool(obb_overlap_batch(
        a.center, a.rotation, a.half_extents,
        b.center, b.rotation, b.half_extents,
    ))


def inscribed_circle_radii(corners):
    """
    Vectorized :func:`inscribed_circle_radius`.

    Args:
        corners (np.ndarray): ``(F, 3, 3)`` triangle corners.

    Returns:
        np.ndarray: ``(F,)`` incircle radii, 0 for degenerate triangles.
    """
    corners = np.asarray(corners, dtype=np.float64).reshape(-1, 3, 3)
    sides = np.linalg.norm(corners[:, [1, 2, 0]] - corners, axis=2)
    semi = 0.5 * sides.sum(axis=1)
    area = 0.5 * np.linalg.norm(
        np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0]),
        axis=1
    )

    degenerate = area <= settings.DEGENERATE_EPSILON * semi * semi
    return np.where(degenerate, 0.0, area / np.where(semi > 0, semi, 1.0))


def inscribed_circle_radius(triangle):
    """
    Radius of the incircle (``area / semi-perimeter``).

    Args:
        triangle (np.ndarray): ``(3, 3)`` corners.

    Returns:
        float: Radius, 0 for degenerate triangles.
    """
    return float(inscribed_circle_radii(triangle)[0])


def max_penetration_bound(sphere_radius, incircle_radius):
    """
    Deepest penetration of a sphere through the face of a triangle, which
    doesn't touch any of its edges.

    Args:
        sphere_radius (float): Sphere radius ``R > 0``.
        incircle_radius (float): Triangle incircle radius ``r >= 0``.

    Returns:
        float: ``R - sqrt(R^2 - r^2)``, ``math.inf`` when ``r >= R``.
    """
    if incircle_radius >= sphere_radius:
        return math.inf

    return sphere_radius - math.sqrt(sphere_radius ** 2 - incircle_radius ** 2)


def incircle_radius_for_depth(sphere_radius, depth):
    """
    Inverse of :func:`max_penetration_bound`: the largest incircle radius
    keeping the penetration under `depth`.
    """
    if depth >= sphere_radius:
        return sphere_radius

    return math.sqrt(2 * sphere_radius * depth - depth ** 2)


def _split_round(vertices, triangles, radii, r_max):
    """
    Bisect longest edges of triangles over `r_max`. Every triangle gets at
    most one split edge, both triangles of a split edge are split.
    """
    edges, inverse, _ = _unique_edges(triangles)
    side_edge = inverse.reshape(-1, 3)

    corners = vertices[triangles]
    lengths = np.linalg.norm(corners[:, [1, 2, 0]] - corners, axis=2)
    longest = np.argmax(lengths, axis=1)

    adjacent = np.full((len(edges), 2), -1, dtype=np.int64)
    faces = np.repeat(np.arange(len(triangles)), 3)
    order = np.argsort(inverse, kind="stable")
    adjacent[:] = faces[order].reshape(-1, 2)

    claimed = np.full(len(triangles), -1, dtype=np.int64)
    split_edges = []

    big = np.flatnonzero(radii > r_max)
    big = big[np.lexsort((big, -radii[big]))]
    for face in big:
        edge = side_edge[face, longest[face]]
        first, second = adjacent[edge]
        if claimed[first] >= 0 or claimed[second] >= 0:
            continue

        claimed[first] = edge
        claimed[second] = edge
        split_edges.append(edge)

    split_edges = np.array(split_edges, dtype=np.int64)
    midpoint_index = np.full(len(edges), -1, dtype=np.int64)
    midpoint_index[split_edges] = len(vertices) + np.arange(len(split_edges))
    midpoints = 0.5 * (
        vertices[edges[split_edges, 0]] + vertices[edges[split_edges, 1]]
    )

    split_faces = np.flatnonzero(claimed >= 0)
    kept = triangles[claimed < 0]

    tri = triangles[split_faces]
    local = np.argmax(side_edge[split_faces] == claimed[split_faces, None],
                      axis=1)
    rows = np.arange(len(split_faces))
    p = tri[rows, local]
    q = tri[rows, (local + 1) % 3]
    o = tri[rows, (local + 2) % 3]
    m = midpoint_index[claimed[split_faces]]

    new_triangles = np.concatenate([
        kept,
        np.column_stack([p, m, o]),
        np.column_stack([m, q, o]),
    ])

    return np.concatenate([vertices, midpoints]), new_triangles


def split_triangles(mesh, r_max, max_iterations=None):
    """
    Refine `mesh` until every incircle radius is at most `r_max`.

    Longest edges are bisected in rounds, the two triangles sharing a bisected
    edge are split together, so the mesh stays watertight and the surface
    doesn't move.

    Args:
        mesh (obj): Watertight :class:`.TriangleMesh`.
        r_max (float): Largest allowed incircle radius.
        max_iterations (int, default None): Round cap,
                       :attr:`~raycollide.settings.SPLIT_MAX_ITERATIONS` by
                       default.

    Returns:
        obj: Refined :class:`.TriangleMesh`, the same object if nothing had to
        be split.

    Raises:
        SplitLimitException: When the cap is reached. Residual radius is in
                             the :attr:`~SplitLimitException.residual`.
    """
    if r_max <= 0:
        raise ValueError("`r_max` has to be positive, not %r." % r_max)

    if max_iterations is None:
        max_iterations = settings.SPLIT_MAX_ITERATIONS

    radii = inscribed_circle_radii(mesh.corners)
    if radii.max() <= r_max:
        return mesh

    vertices = np.array(mesh.vertices)
    triangles = np.array(mesh.triangles)
    for iteration in range(max_iterations):
        vertices, triangles = _split_round(vertices, triangles, radii, r_max)
        radii = inscribed_circle_radii(vertices[triangles])

        logger.debug(
            "Split round %d: %d triangles, max incircle radius %g",
            iteration,
            len(triangles),
            radii.max()
        )
        if radii.max() <= r_max:
            break
    else:
        logger.warning(
            "Triangle splitting didn't reach r_max %g (residual %g).",
            r_max,
            radii.max()
        )
        raise SplitLimitException(
            "Can't reach r_max %g in %d iterations, residual radius %g." % (
                r_max,
                max_iterations,
                radii.max()
            ),
            float(radii.max())
        )

    refined = make_mesh(vertices, triangles)
    logger.info("Split %s into %s", mesh, refined)

    return refined


def vertex_normals(mesh):
    """
    Area weighted unit vertex normals.
    """
    normals = np.zeros_like(mesh.vertices)
    face_normals = mesh.normals
    for k in range(3):
        np.add.at(normals, mesh.triangles[:, k], face_normals)

    length = np.linalg.norm(normals, axis=1, keepdims=True)
    return normals / np.where(length > 0, length, 1.0)


def inflate_mesh(mesh, distance):
    """
    Offset every vertex by `distance` along its vertex normal. Slight
    inflation of robot meshes hides single precision misses near contact.

    Args:
        mesh (obj): :class:`.TriangleMesh`.
        distance (float): Offset in meters, negative shrinks the mesh.

    Returns:
        obj: New :class:`.TriangleMesh` with the same topology.
    """
    if distance == 0:
        return mesh

    return make_mesh(
        mesh.vertices + distance * vertex_normals(mesh),
        mesh.triangles,
    )
