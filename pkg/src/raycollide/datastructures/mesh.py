#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from collections import namedtuple

import numpy as np


# Structures ==================================================================
class TriangleMesh(namedtuple("TriangleMesh", ["vertices",
                                               "triangles",
                                               "edges",
                                               "edge_triangles"])):
    """
    Indexed watertight triangle mesh. Used both for obstacles and robot links.

    Don't create it directly, use :func:`raycollide.mesh.make_mesh` or
    :func:`raycollide.mesh.load_mesh`, which build the edge list and validate
    the topology.

    Attributes:
        vertices (np.ndarray): ``(V, 3)`` float64 positions in meters.
        triangles (np.ndarray): ``(F, 3)`` vertex indices, counter-clockwise
                  when looking from outside (normals point out).
        edges (np.ndarray): ``(E, 2)`` unique undirected edges, ``a < b``.
        edge_triangles (np.ndarray): ``(E, 2)`` indices of the two triangles
                       adjacent to each edge.

    Note:
        All arrays are read-only, so the mesh can be shared between workers.
    """
    @property
    def corners(self):
        """
        Returns:
            np.ndarray: ``(F, 3, 3)`` triangle corner positions.
        """
        return self.vertices[self.triangles]

    @property
    def normals(self):
        """
        Returns:
            np.ndarray: ``(F, 3)`` unnormalized normals (length = 2 * area).
        """
        c = self.corners
        return np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])

    @property
    def areas(self):
        return 0.5 * np.linalg.norm(self.normals, axis=1)

    @property
    def area(self):
        return float(self.areas.sum())

    @property
    def volume(self):
        """
        Returns:
            float: Signed enclosed volume, positive for outward winding.
        """
        c = self.corners
        return float(
            np.einsum("ij,ij->i", c[:, 0], np.cross(c[:, 1], c[:, 2])).sum()
        ) / 6.0

    @property
    def edge_vectors(self):
        return self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]

    def __repr__(self):
        return "TriangleMesh(vertices=%d, triangles=%d, edges=%d)" % (
            len(self.vertices),
            len(self.triangles),
            len(self.edges),
        )
