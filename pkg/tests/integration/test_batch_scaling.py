#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from raycollide import bench
from raycollide.datastructures import BenchConfig


# Tests =======================================================================
def test_per_query_time_drops_with_batch_size():
    config = BenchConfig(poses=4096, batch_sizes=[1, 4096])
    single, full = bench.run(config).records

    assert single.queries == full.queries == 4096
    assert single.collision_fraction == full.collision_fraction
    assert full.batch_time / 4096 <= 0.5 * single.batch_time
