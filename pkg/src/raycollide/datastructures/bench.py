#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
from collections import namedtuple


# Structures ==================================================================
class BenchMode:
    """
    Enum used as :attr:`BenchConfig.mode`.
    """
    DCD_OBS2ROB = "dcd-obs2rob"
    DCD_ROB2OBS = "dcd-rob2obs"
    DCD_TWO_WAY = "dcd-two-way"
    CCD_LINEAR = "ccd-linear"
    CCD_QUADRATIC = "ccd-quadratic"
    CCD_CUBIC = "ccd-cubic"
    CCD_DISCRETIZED = "ccd-discretized"
    ACCURACY = "accuracy"

    ALL = [
        DCD_OBS2ROB,
        DCD_ROB2OBS,
        DCD_TWO_WAY,
        CCD_LINEAR,
        CCD_QUADRATIC,
        CCD_CUBIC,
        CCD_DISCRETIZED,
        ACCURACY,
    ]


class BenchConfig(namedtuple("BenchConfig", ["scenes",
                                             "robot",
                                             "procedural",
                                             "mode",
                                             "batch_sizes",
                                             "poses",
                                             "trajectories",
                                             "control_points",
                                             "resolution",
                                             "seed",
                                             "threads",
                                             "oracle"])):
    """
    Configuration of one benchmark run.

    Attributes:
        scenes (list): Obstacle mesh paths.
        robot (str): Robot model document path, None for the procedural arm.
        procedural (str): Procedural scene (``empty``, ``simple``,
                   ``medium``, ``dense``) used when `scenes` is empty.
        mode (str): One of :class:`BenchMode`.
        batch_sizes (list): Batch sizes to sweep.
        poses (int): Number of Halton poses.
        trajectories (int): Number of trajectories.
        control_points (list): Control point counts.
        resolution (float): Voxel resolution of the accuracy mode.
        seed (int): Halton offset.
        threads (int): Worker count, 0 for hardware parallelism.
        oracle (bool): Compare CCD results against dense oracle labels.
    """
    def __new__(cls, scenes=(), robot=None, procedural="simple",
                mode=BenchMode.DCD_TWO_WAY, batch_sizes=(1,), poses=64,
                trajectories=8, control_points=(8,), resolution=None, seed=0,
                threads=0, oracle=False):
        return super(BenchConfig, cls).__new__(
            cls,
            list(scenes),
            robot,
            procedural,
            mode,
            list(batch_sizes),
            int(poses),
            int(trajectories),
            list(control_points),
            resolution,
            int(seed),
            int(threads),
            bool(oracle),
        )


class BenchRecord(namedtuple("BenchRecord", ["mode",
                                             "batch_size",
                                             "control_points",
                                             "queries",
                                             "batch_time",
                                             "queries_per_second",
                                             "collision_fraction",
                                             "precision",
                                             "recall",
                                             "false_positive_rate",
                                             "false_negative_rate",
                                             "representation",
                                             "environment"])):
    """
    One record of the benchmark report. Fields not applicable to the mode are
    None.

    Attributes:
        mode (str): :class:`BenchMode` value.
        batch_size (int): Queries per batch.
        control_points (int): Control points / poses per trajectory.
        queries (int): Number of queries (poses / trajectories).
        batch_time (float): Mean wall time of one batch in seconds.
        queries_per_second (float): Throughput.
        collision_fraction (float): Fraction of queries in collision.
        precision (float): Volume precision (accuracy mode).
        recall (float): Volume recall (accuracy mode).
        false_positive_rate (float): Against oracle labels.
        false_negative_rate (float): Against oracle labels.
        representation (str): Representation measured by accuracy mode.
        environment (str): Host / library description.
    """
    def __new__(cls, mode, batch_size=None, control_points=None, queries=None,
                batch_time=None, queries_per_second=None,
                collision_fraction=None, precision=None, recall=None,
                false_positive_rate=None, false_negative_rate=None,
                representation=None, environment=None):
        return super(BenchRecord, cls).__new__(
            cls, mode, batch_size, control_points, queries, batch_time,
            queries_per_second, collision_fraction, precision, recall,
            false_positive_rate, false_negative_rate, representation,
            environment
        )


#: Fields excluded from determinism comparisons.
TIMING_FIELDS = ["batch_time", "queries_per_second", "environment"]


class BenchReport(namedtuple("BenchReport", ["records"])):
    """
    Result of :func:`raycollide.bench.run`.

    Attributes:
        records (list): :class:`BenchRecord` structures.
    """
    pass
