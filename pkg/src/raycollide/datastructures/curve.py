#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from collections import namedtuple

import numpy as np


# Structures ==================================================================
class CurveKind:
    """
    Enum used as :attr:`SweptSphereCurve.kind`.
    """
    PIECEWISE_LINEAR = "piecewise_linear"
    QUADRATIC_BSPLINE = "quadratic_bspline"
    CUBIC_BSPLINE = "cubic_bspline"

    DEGREES = {
        PIECEWISE_LINEAR: 1,
        QUADRATIC_BSPLINE: 2,
        CUBIC_BSPLINE: 3,
    }


class SweptSphereCurve(namedtuple("SweptSphereCurve", ["kind",
                                                       "control_points",
                                                       "radius",
                                                       "knots"])):
    """
    Constant radius tube around a path, closed by spheres at both ends. This
    is exactly the volume swept by a sphere moving along the path.

    Attributes:
        kind (str): One of :class:`CurveKind`.
        control_points (np.ndarray): ``(n, 3)`` control points.
        radius (float): Tube radius.
        knots (np.ndarray, default None): Clamped knot vector of spline kinds,
              None for piecewise linear curves.
    """
    def __new__(cls, kind, control_points, radius, knots=None):
        return super(SweptSphereCurve, cls).__new__(
            cls,
            kind,
            np.asarray(control_points, dtype=np.float64),
            float(radius),
            None if knots is None else np.asarray(knots, dtype=np.float64),
        )

    @property
    def degree(self):
        return CurveKind.DEGREES[self.kind]

    @property
    def start(self):
        return self.control_points[0]

    @property
    def end(self):
        return self.control_points[-1]


class SplineFitOperator(namedtuple("SplineFitOperator", ["degree",
                                                         "m",
                                                         "n",
                                                         "knots",
                                                         "params",
                                                         "basis",
                                                         "pinv"])):
    """
    Precomputed least squares operator mapping `m` trajectory points to `n`
    control points of a clamped uniform B-spline.

    Attributes:
        degree (int): Spline degree (2 or 3).
        m (int): Number of trajectory points.
        n (int): Number of control points.
        knots (np.ndarray): Clamped uniform knot vector.
        params (np.ndarray): ``(m,)`` curve parameters of trajectory points.
        basis (np.ndarray): ``(m, n)`` basis matrix ``Phi[j][i] = B_i(u_j)``.
        pinv (np.ndarray): ``(n, m)`` pseudo-inverse of `basis`.
    """
    pass


class DirectedEdgeSet(namedtuple("DirectedEdgeSet", ["directed",
                                                     "duplicated",
                                                     "component_count"])):
    """
    Edge rays of an obstacle mesh oriented so, that they form strongly
    connected directed graph on each connected mesh component.

    Attributes:
        directed (np.ndarray): ``(D, 2)`` directed edges ``from, to``.
        duplicated (np.ndarray): ``(E,)`` bool, True for mesh edges traced in
                   both directions.
        component_count (int): Number of connected mesh components.
    """
    @property
    def duplication_ratio(self):
        if not len(self.duplicated):
            return 0.0

        return float(np.count_nonzero(self.duplicated)) / len(self.duplicated)
