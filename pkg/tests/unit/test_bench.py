#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
# Imports =====================================================================
import pandas as pd
import pytest

from raycollide import bench
from raycollide import scenes
from raycollide import settings
from raycollide.datastructures import BenchMode
from raycollide.datastructures import BenchConfig
from raycollide.datastructures import BenchRecord
from raycollide.datastructures import BenchReport
from raycollide.datastructures.bench import TIMING_FIELDS


# Functions & objects =========================================================
def stable(report):
    return [
        {
            key: value
            for key, value in record._asdict().items()
            if key not in TIMING_FIELDS
        }
        for record in report.records
    ]


# Tests =======================================================================
@pytest.mark.parametrize("config", [
    BenchConfig(mode="unknown"),
    BenchConfig(batch_sizes=[]),
    BenchConfig(batch_sizes=[4, 0]),
    BenchConfig(poses=0),
    BenchConfig(mode=BenchMode.CCD_LINEAR, trajectories=0),
    BenchConfig(mode=BenchMode.CCD_LINEAR, control_points=[]),
    BenchConfig(mode=BenchMode.CCD_LINEAR, control_points=[1, 8]),
    BenchConfig(mode=BenchMode.CCD_QUADRATIC, control_points=[2]),
    BenchConfig(mode=BenchMode.CCD_CUBIC, control_points=[3]),
    BenchConfig(mode=BenchMode.CCD_CUBIC, control_points=[4, 33]),
    BenchConfig(mode=BenchMode.ACCURACY, resolution=0),
    BenchConfig(mode=BenchMode.ACCURACY, resolution=-0.01),
])
def test_validate_config_errors(config):
    with pytest.raises(bench.BenchConfigException):
        bench.validate_config(config)


def test_validate_config():
    bench.validate_config(BenchConfig())
    bench.validate_config(
        BenchConfig(mode=BenchMode.CCD_DISCRETIZED, control_points=[1])
    )
    bench.validate_config(
        BenchConfig(mode=BenchMode.CCD_CUBIC, control_points=[4, 32])
    )


def test_default_modes():
    assert BenchMode.CCD_CUBIC not in bench.DEFAULT_MODES
    assert BenchMode.ACCURACY in bench.DEFAULT_MODES
    assert len(bench.DEFAULT_MODES) == len(BenchMode.ALL) - 1


def test_rates():
    predicted = [True, True, False, False, True]
    labels = [True, False, True, False, None]

    assert bench._rates(predicted, labels) == (0.5, 0.5)


def test_rates_undecided():
    assert bench._rates([True, False], [None, None]) == (None, None)


def test_rates_one_class():
    assert bench._rates([True, True], [True, True]) == (0.0, 0.0)
    assert bench._rates([True, False], [False, False]) == (0.5, 0.0)


def test_timed():
    calls = []

    def function(batch):
        calls.append(list(batch))
        return len(batch)

    results, batch_time, total = bench._timed(function, list(range(5)), 2)

    assert results == [2, 2, 1]
    assert calls[0] == [0, 1]  # warm-up
    assert len(calls) == 4
    assert batch_time == pytest.approx(total / 3)


def test_run_dcd():
    config = BenchConfig(poses=8, batch_sizes=[1, 3, 8])
    report = bench.run(config)

    assert [r.batch_size for r in report.records] == [1, 3, 8]
    assert all(r.queries == 8 for r in report.records)
    assert all(r.batch_time >= 0 for r in report.records)
    assert all(r.environment for r in report.records)
    assert len({r.collision_fraction for r in report.records}) == 1


def test_run_deterministic():
    config = BenchConfig(poses=6, batch_sizes=[2], seed=3)

    assert stable(bench.run(config)) == stable(bench.run(config))


def test_run_ccd():
    config = BenchConfig(
        mode=BenchMode.CCD_LINEAR,
        trajectories=2,
        batch_sizes=[1, 2],
        control_points=[4],
    )
    report = bench.run(config)

    assert len(report.records) == 2
    assert all(r.control_points == 4 for r in report.records)
    assert all(r.queries == 2 for r in report.records)
    assert report.records[0].collision_fraction == \
        report.records[1].collision_fraction


def test_run_keeps_thread_setting():
    before = settings.THREADS
    record, = bench.run(
        BenchConfig(poses=4, batch_sizes=[4], threads=2)
    ).records

    assert settings.THREADS == before
    assert record.environment.endswith(", 2 threads")


def test_run_empty_scene():
    config = BenchConfig(procedural="empty", poses=4, batch_sizes=[4])
    record, = bench.run(config).records

    assert record.collision_fraction == 0.0


def test_run_scene_file(write_obj):
    path = write_obj(scenes.box([0.1, 0.1, 0.1], [0.4, 0, 0.4]))
    config = BenchConfig(scenes=[path], poses=4, batch_sizes=[4])

    record, = bench.run(config).records

    assert record.queries == 4


def test_report_frame():
    report = BenchReport([
        BenchRecord(mode=BenchMode.DCD_TWO_WAY, batch_size=4, queries=8),
        BenchRecord(mode=BenchMode.ACCURACY, precision=0.5, recall=1.0,
                    representation="sphere-linear"),
    ])
    frame = bench.report_frame(report)

    assert list(frame.columns) == list(BenchRecord._fields)
    assert len(frame) == 2
    assert frame["batch_size"][0] == 4


def test_summary_table():
    report = BenchReport([
        BenchRecord(mode=BenchMode.DCD_TWO_WAY, batch_size=4, queries=8,
                    batch_time=0.123456),
    ])
    table = bench.summary_table(report)

    assert "dcd-two-way" in table
    assert "0.1235" in table
    assert "precision" not in table


def test_summary_table_empty():
    assert bench.summary_table(BenchReport([])) == "(no records)"


def test_emit(tmpdir):
    path = str(tmpdir.join("report.csv"))
    bench.emit(BenchReport([
        BenchRecord(mode=BenchMode.DCD_OBS2ROB, batch_size=1, queries=2),
    ]), path)

    frame = pd.read_csv(path)

    assert list(frame.columns) == list(BenchRecord._fields)
    assert frame["mode"][0] == "dcd-obs2rob"


def test_emit_empty(tmpdir):
    path = tmpdir.join("report.csv")
    bench.emit(BenchReport([]), str(path))

    assert path.read().strip() == ",".join(BenchRecord._fields)


def test_parse_args():
    args = bench.parse_args([])

    assert args.mode == BenchMode.DCD_TWO_WAY
    assert args.procedural == "simple"
    assert args.batch_sizes == [1, 16, 256, 4096]
    assert args.control_points == [4, 8, 16]
    assert args.scene == []
    assert not args.oracle


def test_parse_args_values():
    args = bench.parse_args([
        "--mode", "all", "--scene", "a.obj", "--scene", "b.stl",
        "--batch-sizes", "2", "8", "--seed", "5",
    ])
    config = bench.config_from_args(args, BenchMode.CCD_LINEAR)

    assert config.scenes == ["a.obj", "b.stl"]
    assert config.batch_sizes == [2, 8]
    assert config.seed == 5
    assert config.mode == BenchMode.CCD_LINEAR


def test_parse_args_rejects_zero_batch():
    with pytest.raises(SystemExit):
        bench.parse_args(["--batch-sizes", "0"])


def test_main(tmpdir, capsys):
    path = str(tmpdir.join("out.csv"))
    code = bench.main([
        "--poses", "4", "--batch-sizes", "2", "--out", path,
    ])

    assert code == 0
    assert "dcd-two-way" in capsys.readouterr().out
    assert len(pd.read_csv(path)) == 1


def test_main_bad_config(capsys):
    code = bench.main(["--mode", "ccd-cubic", "--control-points", "2"])

    assert code == 1
    assert capsys.readouterr().err.startswith("raycollide-bench:")


def test_main_missing_scene(tmpdir, capsys):
    code = bench.main([
        "--scene", str(tmpdir.join("missing.obj")), "--poses", "2",
        "--batch-sizes", "1",
    ])

    assert code == 1
    assert "raycollide-bench:" in capsys.readouterr().err
