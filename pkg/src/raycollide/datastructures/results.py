#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
#= Imports ====================================================================
"""
This module provides Result objects, that are sent back as answers to
requests.

All classes defined here are just simple namedtuple data containers, without
any other functionality.
"""
from collections import namedtuple

import numpy as np


class DcdResult(namedtuple("DcdResult", ["in_collision", "detail"])):
    """
    Response to :class:`.DcdRequest`.

    Attributes:
        in_collision (np.ndarray): ``(K,)`` bool per configuration.
        detail (np.ndarray, default None): ``(K, L, O)`` bool per
               configuration, link and obstacle, when requested.
    """
    def __new__(cls, in_collision, detail=None):
        return super(DcdResult, cls).__new__(
            cls,
            np.asarray(in_collision, dtype=bool),
            detail,
        )

    def merge(self, other):
        """
        Per configuration OR of two results of the same batch.
        """
        detail = None
        if self.detail is not None and other.detail is not None:
            detail = self.detail | other.detail

        return DcdResult(self.in_collision | other.in_collision, detail)

    @property
    def collision_fraction(self):
        if not len(self.in_collision):
            return 0.0

        return float(np.count_nonzero(self.in_collision)) / \
            len(self.in_collision)


class CcdResult(namedtuple("CcdResult", ["in_collision"])):
    """
    Response to :class:`.CcdRequest`.

    Attributes:
        in_collision (np.ndarray): ``(T,)`` bool per trajectory.
    """
    pass
