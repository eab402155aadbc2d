#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import os
import time
import threading

import pytest

from raycollide import parallel
from raycollide import settings


# Fixtures ====================================================================
@pytest.fixture
def threads_setting():
    backup = settings.THREADS
    yield
    settings.THREADS = backup


# Tests =======================================================================
def test_worker_count(threads_setting):
    settings.THREADS = 0

    assert parallel.worker_count() == (os.cpu_count() or 1)
    assert parallel.worker_count(3) == 3
    assert parallel.worker_count(-2) == 1


def test_worker_count_setting(threads_setting):
    settings.THREADS = 5

    assert parallel.worker_count() == 5
    assert parallel.worker_count(0) == 5
    assert parallel.worker_count(2) == 2


@pytest.mark.parametrize("threads", [1, 4])
def test_map_ordered(threads):
    def slow_square(x):
        time.sleep(0.001 * (10 - x))
        return x * x

    assert parallel.map_ordered(slow_square, range(10), threads) == [
        x * x for x in range(10)
    ]


def test_map_ordered_uses_workers():
    names = set()

    def record(x):
        names.add(threading.current_thread().name)
        time.sleep(0.01)
        return x

    assert parallel.map_ordered(record, range(8), 4) == list(range(8))
    assert len(names) > 1


def test_map_ordered_empty():
    assert parallel.map_ordered(len, [], 4) == []
