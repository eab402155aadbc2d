#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
"""
Benchmark and accuracy harness.

Usage::

    raycollide-bench --mode dcd-two-way --procedural dense \\
        --batch-sizes 1 64 4096 --poses 4096 --out dcd.csv

    raycollide-bench --mode accuracy --trajectories 4 \\
        --control-points 4 8 16 --resolution 0.004 --out table.csv

Queries are generated from Halton offsets given by ``--seed``, so every
non-timing field of the report depends only on the configuration. Scene,
BVH, fit operator and edge orientation precompute run before the timed
region, the first batch of every sweep is run once as a warm-up.
"""
import sys
import time
import logging
import argparse
import platform

import numpy as np
import pandas as pd

from . import dcd
from . import ccd
from . import oracle
from . import parallel
from . import scenes
from . import settings
from . import volumetry
from . import kinematics
from .mesh import load_mesh
from .mesh import MeshException
from .rt import RayTracingException
from .kinematics import KinematicsException
from .volumetry import VolumetryException
from .datastructures import CurveKind
from .datastructures import BenchMode
from .datastructures import BenchConfig
from .datastructures import BenchRecord
from .datastructures import BenchReport


# Variables ===================================================================
logger = logging.getLogger(__name__)

_DCD_VARIANTS = {
    BenchMode.DCD_OBS2ROB: dcd.Variant.OBS2ROB,
    BenchMode.DCD_ROB2OBS: dcd.Variant.ROB2OBS,
    BenchMode.DCD_TWO_WAY: dcd.Variant.TWO_WAY,
}

_CCD_KINDS = {
    BenchMode.CCD_LINEAR: CurveKind.PIECEWISE_LINEAR,
    BenchMode.CCD_QUADRATIC: CurveKind.QUADRATIC_BSPLINE,
    BenchMode.CCD_CUBIC: CurveKind.CUBIC_BSPLINE,
}

#: Default mode sweep of ``--mode all``, cubic splines are opt-in.
DEFAULT_MODES = [
    mode for mode in BenchMode.ALL if mode != BenchMode.CCD_CUBIC
]


# Functions & objects =========================================================
class BenchConfigException(Exception):
    def __init__(self, message):
        Exception.__init__(self, message)


def environment(threads=None):
    """
    Short description of the host, stored in every timed record.
    """
    return "python %s, numpy %s, %s, %d threads" % (
        platform.python_version(),
        np.__version__,
        platform.machine(),
        parallel.worker_count(threads),
    )


def validate_config(config):
    """
    Raises:
        BenchConfigException: For infeasible configuration.
    """
    if config.mode not in BenchMode.ALL:
        raise BenchConfigException("Unknown mode `%s`." % config.mode)

    if not config.batch_sizes or min(config.batch_sizes) < 1:
        raise BenchConfigException("Batch sizes have to be at least 1.")

    if config.poses < 1 or config.trajectories < 1:
        raise BenchConfigException("Pose and trajectory counts have to be "
                                   "at least 1.")

    if not config.control_points:
        raise BenchConfigException("At least one control point count needed.")

    minimal = 2
    if config.mode in _CCD_KINDS:
        minimal = CurveKind.DEGREES[_CCD_KINDS[config.mode]] + 1
    if config.mode == BenchMode.CCD_DISCRETIZED:
        minimal = 1

    if min(config.control_points) < minimal:
        raise BenchConfigException(
            "Mode `%s` needs at least %d control points." % (config.mode,
                                                            minimal)
        )
    if max(config.control_points) > settings.SPLINE_FIT_SAMPLES and \
       config.mode in (BenchMode.CCD_QUADRATIC, BenchMode.CCD_CUBIC):
        raise BenchConfigException(
            "Spline fit uses %d samples, can't fit %d control points." % (
                settings.SPLINE_FIT_SAMPLES,
                max(config.control_points),
            )
        )

    if config.resolution is not None and config.resolution <= 0:
        raise BenchConfigException("Resolution has to be positive.")


def _load(config):
    robot = scenes.procedural_arm()
    if config.robot:
        robot = kinematics.load_robot(config.robot)

    if config.scenes:
        meshes = [load_mesh(path) for path in config.scenes]
    else:
        meshes = scenes.procedural_scene(config.procedural)

    return robot, meshes


def _rates(predicted, labels):
    """
    False positive / negative rates over decided labels.
    """
    decided = np.array([label is not None for label in labels])
    if not decided.any():
        return None, None

    truth = np.array([bool(label) for label in labels])[decided]
    predicted = np.asarray(predicted)[decided]

    negatives = np.count_nonzero(~truth)
    positives = np.count_nonzero(truth)
    false_positive = np.count_nonzero(predicted & ~truth)
    false_negative = np.count_nonzero(~predicted & truth)

    return (
        false_positive / negatives if negatives else 0.0,
        false_negative / positives if positives else 0.0,
    )


def _timed(function, items, batch_size):
    """
    Run `function` over batches of `items` after one warm-up batch.

    Returns:
        tuple: ``(results, mean batch time, total time)``
    """
    batches = [
        items[begin:begin + batch_size]
        for begin in range(0, len(items), batch_size)
    ]
    function(batches[0])

    results = []
    start = time.perf_counter()
    for batch in batches:
        results.append(function(batch))
    total = time.perf_counter() - start

    return results, total / len(batches), total


def _run_dcd(config, robot_index, scene, meshes):
    variant = _DCD_VARIANTS[config.mode]
    configs = kinematics.sample_halton(config.poses, robot_index.robot,
                                       config.seed)

    labels = None
    if config.oracle:
        labels = [
            oracle.pose_label(q, robot_index.robot, meshes)
            for q in configs
        ]

    records = []
    for batch_size in config.batch_sizes:
        results, batch_time, total = _timed(
            lambda batch: dcd.detect(batch, robot_index, scene, variant),
            configs,
            batch_size,
        )
        flags = np.concatenate([r.in_collision for r in results])

        false_positive, false_negative = None, None
        if labels is not None:
            false_positive, false_negative = _rates(flags, labels)

        records.append(BenchRecord(
            mode=config.mode,
            batch_size=batch_size,
            queries=len(configs),
            batch_time=batch_time,
            queries_per_second=len(configs) / total if total else None,
            collision_fraction=float(flags.mean()),
            false_positive_rate=false_positive,
            false_negative_rate=false_negative,
            environment=environment(config.threads or None),
        ))
        logger.info("%s batch %d: %.3g s per batch", config.mode, batch_size,
                    batch_time)

    return records


def benchmark_trajectories(config, robot):
    """
    Halton trajectories densely sampled for spline fitting.
    """
    return kinematics.halton_trajectories(
        robot,
        config.trajectories,
        settings.SPLINE_FIT_SAMPLES,
        config.seed,
    )


def _ccd_query(config, robot_index, scene, n):
    if config.mode == BenchMode.CCD_DISCRETIZED:
        return lambda batch: ccd.detect_discretized(batch, robot_index,
                                                    scene, n)

    kind = _CCD_KINDS[config.mode]
    if kind == CurveKind.PIECEWISE_LINEAR:
        return lambda batch: ccd.detect_swept(
            [kinematics.resample_trajectory(t, n) for t in batch],
            robot_index,
            scene,
            kind,
            threads=config.threads or None,
        )

    return lambda batch: ccd.detect_swept(batch, robot_index, scene, kind, n,
                                          threads=config.threads or None)


def _run_ccd(config, robot_index, scene, meshes):
    robot = robot_index.robot
    trajectories = benchmark_trajectories(config, robot)
    scene = ccd.orient_scene(scene)

    labels = None
    if config.oracle:
        labels = [
            oracle.dense_sphere_label(t, robot, meshes)[0]
            for t in trajectories
        ]

    records = []
    for n in config.control_points:
        if config.mode in (BenchMode.CCD_QUADRATIC, BenchMode.CCD_CUBIC):
            # fit operator is precompute
            ccd.build_fit_operator(settings.SPLINE_FIT_SAMPLES, n,
                                   CurveKind.DEGREES[_CCD_KINDS[config.mode]])

        for batch_size in config.batch_sizes:
            results, batch_time, total = _timed(
                _ccd_query(config, robot_index, scene, n),
                trajectories,
                batch_size,
            )
            flags = np.concatenate([r.in_collision for r in results])

            false_positive, false_negative = None, None
            if labels is not None:
                false_positive, false_negative = _rates(flags, labels)

            records.append(BenchRecord(
                mode=config.mode,
                batch_size=batch_size,
                control_points=n,
                queries=len(trajectories),
                batch_time=batch_time,
                queries_per_second=(
                    len(trajectories) / total if total else None
                ),
                collision_fraction=float(flags.mean()),
                false_positive_rate=false_positive,
                false_negative_rate=false_negative,
                environment=environment(config.threads or None),
            ))

    return records


def trajectory_bounds(robot, trajectory, margin=None):
    """
    Grid bounds enclosing robot meshes and spheres along `trajectory`.
    """
    configs = kinematics.resample_trajectory(trajectory, 64)
    poses = kinematics.forward_kinematics_batch(configs, robot)

    points = [kinematics.sphere_centers(poses, robot).reshape(-1, 4)]
    points = [
        points[0][:, :3] - points[0][:, 3:],
        points[0][:, :3] + points[0][:, 3:],
    ]
    for index, link in enumerate(robot.links):
        transforms = poses.transforms[:, index]
        points.append(
            (np.einsum("kij,vj->kvi", transforms[:, :3, :3],
                       link.mesh.vertices) +
             transforms[:, None, :3, 3]).reshape(-1, 3)
        )

    return volumetry.bounds_around(np.concatenate(points), margin)


class _Coverage(object):
    """
    Sums confusion counts of one representation over trajectories.
    """
    def __init__(self):
        self.true_positive = 0
        self.approx = 0
        self.truth = 0

    def add(self, metrics):
        self.true_positive += metrics.true_positive
        self.approx += metrics.approx_total
        self.truth += metrics.truth_total

    @property
    def precision(self):
        return self.true_positive / self.approx if self.approx else 1.0

    @property
    def recall(self):
        return self.true_positive / self.truth if self.truth else 1.0


def _run_accuracy(config, robot_index, scene, meshes):
    robot = robot_index.robot
    resolution = config.resolution or settings.VOXEL_RESOLUTION
    threads = config.threads or None
    trajectories = benchmark_trajectories(config, robot)

    totals = {}

    def add(representation, n, approx, truth):
        key = (representation, n)
        totals.setdefault(key, _Coverage()).add(
            volumetry.coverage(approx, truth)
        )

    for trajectory in trajectories:
        bounds = trajectory_bounds(robot, trajectory)

        # discrete pose at the start of the trajectory
        pose = trajectory[:1]
        pose_truth = volumetry.voxelize_robot(robot, pose, resolution, bounds,
                                              threads=threads)
        spheres = kinematics.sphere_centers(
            kinematics.forward_kinematics_batch(pose, robot), robot
        )
        add("sphere-pose", None,
            volumetry.voxelize_spheres(spheres[0], resolution, bounds),
            pose_truth)
        add("mesh-pose", None, pose_truth, pose_truth)

        truth = volumetry.swept_truth_grid(robot, trajectory, resolution,
                                           bounds, threads=threads)
        for n in config.control_points:
            discretized = kinematics.resample_trajectory(trajectory, n)
            add("mesh-discretized", n,
                volumetry.voxelize_robot(robot, discretized, resolution,
                                         bounds, threads=threads),
                truth)

            if n >= 2:
                linear = ccd.generate_swept_curves(
                    discretized, robot, CurveKind.PIECEWISE_LINEAR
                )
                add("sphere-linear", n,
                    volumetry.voxelize_swept_spheres(linear, resolution,
                                                     bounds),
                    truth)

            if 3 <= n <= len(trajectory):
                quadratic = ccd.generate_swept_curves(
                    trajectory, robot, CurveKind.QUADRATIC_BSPLINE, n
                )
                add("sphere-quadratic", n,
                    volumetry.voxelize_swept_spheres(quadratic, resolution,
                                                     bounds),
                    truth)

    return [
        BenchRecord(
            mode=config.mode,
            control_points=n,
            queries=len(trajectories),
            precision=coverage.precision,
            recall=coverage.recall,
            representation=representation,
        )
        for (representation, n), coverage in totals.items()
    ]


_RUNNERS = {
    BenchMode.DCD_OBS2ROB: _run_dcd,
    BenchMode.DCD_ROB2OBS: _run_dcd,
    BenchMode.DCD_TWO_WAY: _run_dcd,
    BenchMode.CCD_LINEAR: _run_ccd,
    BenchMode.CCD_QUADRATIC: _run_ccd,
    BenchMode.CCD_CUBIC: _run_ccd,
    BenchMode.CCD_DISCRETIZED: _run_ccd,
    BenchMode.ACCURACY: _run_accuracy,
}


def run(config):
    """
    Run benchmark described by `config`.

    Args:
        config (obj): :class:`.BenchConfig`.

    Returns:
        obj: :class:`.BenchReport`.

    Raises:
        BenchConfigException: For infeasible configuration.
        MeshException, KinematicsException: For invalid inputs.
    """
    validate_config(config)
    robot, meshes = _load(config)
    scene = dcd.build_scene(meshes)
    robot_index = dcd.prepare_robot(robot)

    records = _RUNNERS[config.mode](config, robot_index, scene, meshes)
    return BenchReport(records)


def report_frame(report):
    """
    Returns:
        obj: :class:`pandas.DataFrame` with one row per record.
    """
    return pd.DataFrame(
        [record._asdict() for record in report.records],
        columns=list(BenchRecord._fields),
    )


def summary_table(report):
    """
    Human readable table of the report.
    """
    frame = report_frame(report).dropna(axis=1, how="all")
    if frame.empty:
        return "(no records)"

    return frame.to_string(index=False, float_format=lambda x: "%.4g" % x)


def emit(report, path):
    """
    Write `report` as CSV with one row per record. Empty report gives header
    only.

    Raises:
        OSError: If `path` can't be written.
    """
    report_frame(report).to_csv(path, index=False)


def _positive_int(value):
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("%r is not positive integer." % value)

    return number


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        description="Ray traced collision detection benchmark."
    )
    parser.add_argument(
        "--scene",
        action="append",
        default=[],
        help="Obstacle mesh path. May be repeated."
    )
    parser.add_argument(
        "--procedural",
        default="simple",
        choices=scenes.PROCEDURAL_SCENES,
        help="Procedural scene used when no --scene is given."
    )
    parser.add_argument(
        "--robot",
        default=None,
        help="Robot model JSON document. Procedural 7-DoF arm by default."
    )
    parser.add_argument(
        "--mode",
        default=BenchMode.DCD_TWO_WAY,
        choices=BenchMode.ALL + ["all"],
        help="Benchmark mode."
    )
    parser.add_argument(
        "--batch-sizes",
        nargs="+",
        type=_positive_int,
        default=[1, 16, 256, 4096],
        help="Batch sizes to sweep."
    )
    parser.add_argument("--poses", type=_positive_int, default=4096)
    parser.add_argument("--trajectories", type=_positive_int, default=30)
    parser.add_argument(
        "--control-points",
        nargs="+",
        type=_positive_int,
        default=[4, 8, 16],
    )
    parser.add_argument(
        "--resolution",
        type=float,
        default=None,
        help="Voxel edge of the accuracy mode in meters."
    )
    parser.add_argument("--seed", type=int, default=0, help="Halton offset.")
    parser.add_argument(
        "--threads",
        type=int,
        default=0,
        help="Worker threads, 0 for hardware parallelism."
    )
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="Compute false positive / negative rates against brute force."
    )
    parser.add_argument("--out", default=None, help="Output CSV path.")
    parser.add_argument("-v", "--verbose", action="store_true")

    return parser.parse_args(argv)


def config_from_args(args, mode):
    return BenchConfig(
        scenes=args.scene,
        robot=args.robot,
        procedural=args.procedural,
        mode=mode,
        batch_sizes=args.batch_sizes,
        poses=args.poses,
        trajectories=args.trajectories,
        control_points=args.control_points,
        resolution=args.resolution,
        seed=args.seed,
        threads=args.threads,
        oracle=args.oracle,
    )


def main(argv=None):
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else settings.LOG_LEVEL,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )

    modes = DEFAULT_MODES if args.mode == "all" else [args.mode]
    try:
        records = []
        for mode in modes:
            records.extend(run(config_from_args(args, mode)).records)
        report = BenchReport(records)

        if args.out:
            emit(report, args.out)
    except (BenchConfigException, MeshException, KinematicsException,
            RayTracingException, VolumetryException, ccd.CurveException,
            dcd.CollisionSceneException, OSError) as e:
        sys.stderr.write("raycollide-bench: %s\n" % e)
        return 1

    print(summary_table(report))
    return 0


if __name__ == '__main__':
    sys.exit(main())
