#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from .results import *
from .requests import *

from .mesh import TriangleMesh
from .obb import Obb
from .obb import ObbBatch
from .ray import FaceSide
from .ray import Ray
from .ray import RayBatch
from .ray import Hit
from .ray import HitSet
from .robot import JointType
from .robot import Joint
from .robot import Link
from .robot import RobotModel
from .robot import PoseBatch
from .curve import CurveKind
from .curve import SweptSphereCurve
from .curve import SplineFitOperator
from .curve import DirectedEdgeSet
from .voxel import VoxelGrid
from .voxel import CoverageMetrics
from .bench import BenchMode
from .bench import BenchConfig
from .bench import BenchRecord
from .bench import BenchReport
