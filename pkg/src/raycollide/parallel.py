#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
"""
Worker pool used for trajectory and voxel slab parallelism. Every task writes
only its own result, results are returned in the order of the inputs.
"""
# Imports =====================================================================
import os
import logging
import concurrent.futures

from . import settings


# Variables ===================================================================
logger = logging.getLogger(__name__)


# Functions & objects =========================================================
def worker_count(threads=None):
    """
    Args:
        threads (int, default None): Requested count, ``0`` or None means
                :attr:`~raycollide.settings.THREADS`, which defaults to the
                hardware parallelism.

    Returns:
        int: Number of workers, at least 1.
    """
    if not threads:
        threads = settings.THREADS

    if not threads:
        threads = os.cpu_count() or 1

    return max(1, int(threads))


def map_ordered(function, items, threads=None):
    """
    ``list(map(function, items))`` evaluated by a thread pool.
    """
    items = list(items)
    workers = min(worker_count(threads), len(items))
    if workers <= 1:
        return [function(item) for item in items]

    logger.debug("Mapping %d tasks over %d workers", len(items), workers)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))
