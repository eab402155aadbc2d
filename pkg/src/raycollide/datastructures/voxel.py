#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from collections import namedtuple

import numpy as np


# Structures ==================================================================
class VoxelGrid(namedtuple("VoxelGrid", ["origin",
                                         "resolution",
                                         "dims",
                                         "occupancy"])):
    """
    Dense occupancy grid. Voxel ``(i, j, k)`` has center
    ``origin + (i + 0.5, j + 0.5, k + 0.5) * resolution``.

    Attributes:
        origin (np.ndarray): ``(3,)`` minimal corner of the grid.
        resolution (float): Voxel edge length in meters.
        dims (tuple): Number of voxels along x, y, z.
        occupancy (np.ndarray): ``dims`` shaped bool array.
    """
    def __new__(cls, origin, resolution, dims, occupancy=None):
        dims = tuple(int(d) for d in dims)
        if occupancy is None:
            occupancy = np.zeros(dims, dtype=bool)

        return super(VoxelGrid, cls).__new__(
            cls,
            np.asarray(origin, dtype=np.float64),
            float(resolution),
            dims,
            np.asarray(occupancy, dtype=bool).reshape(dims),
        )

    def count(self):
        return int(np.count_nonzero(self.occupancy))

    @property
    def voxel_volume(self):
        return self.resolution ** 3

    @property
    def volume(self):
        return self.count() * self.voxel_volume

    def axis_centers(self, axis):
        """
        Returns:
            np.ndarray: Voxel center coordinates along `axis`.
        """
        return self.origin[axis] + \
            (np.arange(self.dims[axis]) + 0.5) * self.resolution

    def same_layout(self, other):
        return (
            self.dims == other.dims and
            self.resolution == other.resolution and
            np.array_equal(self.origin, other.origin)
        )

    def with_occupancy(self, occupancy):
        return VoxelGrid(self.origin, self.resolution, self.dims, occupancy)


class CoverageMetrics(namedtuple("CoverageMetrics", ["precision",
                                                     "recall",
                                                     "true_positive",
                                                     "approx_total",
                                                     "truth_total"])):
    """
    Volume coverage of an approximated volume against the true volume.

    Attributes:
        precision (float): ``true_positive / approx_total``.
        recall (float): ``true_positive / truth_total``.
        true_positive (int): Voxels occupied in both grids.
        approx_total (int): Voxels of the approximated volume.
        truth_total (int): Voxels of the true volume.
    """
    pass
