import math

import numpy as np
import pytest

import fans
from fans import bench, rng
from fans.bench import BenchSettings, compute_metrics, run_benchmark, write_report
from fans.errors import ConfigError


def test_metrics_single_rep():
    assert compute_metrics([0.1]) == (0.1, 0.0)


def test_metrics_zero_mad():
    median, se = compute_metrics([0.0, 0.0, 0.0, 1.0])
    assert median == 0.0
    assert se == 0.0


def test_metrics_hand_value():
    median, se = compute_metrics([0.1, 0.2, 0.3, 0.4, 0.5])
    assert median == pytest.approx(0.3, abs=1e-15)
    assert se == pytest.approx(1.4826 * 0.1 / math.sqrt(5), abs=1e-12)
    assert se == pytest.approx(0.0663, abs=1e-4)


def test_metrics_sd_flavor():
    vals = [0.1, 0.2, 0.3]
    _, se = compute_metrics(vals, se="sd")
    assert se == pytest.approx(np.std(vals, ddof=1) / math.sqrt(3), abs=1e-15)
    assert compute_metrics([0.4], se="sd") == (0.4, 0.0)


def test_metrics_errors():
    with pytest.raises(ConfigError):
        compute_metrics([])
    with pytest.raises(ConfigError):
        compute_metrics([0.1], se="iqr")


def _small_settings(**kw):
    base = dict(
        methods=("fans", "nb"),
        seed=11,
        example="ex4",
        p=3,
        n_per_class=30,
        n_test_per_class=40,
        n_splits=2,
        path_length=30,
    )
    base.update(kw)
    return BenchSettings(**base)


def test_benchmark_deterministic_across_workers():
    a = run_benchmark(_small_settings(), reps=3, workers=1)
    b = run_benchmark(_small_settings(), reps=3, workers=2)
    for m in ("fans", "nb"):
        assert np.array_equal(a.errors[m], b.errors[m])


def test_benchmark_reps_vary_data():
    report = run_benchmark(_small_settings(), reps=3, workers=1)
    assert report.errors["fans"].shape == (3,)
    for m in report.methods:
        assert np.all((report.errors[m] >= 0.0) & (report.errors[m] <= 1.0))
    # different reps draw different data, so errors are not all identical
    assert len({round(float(e), 12) for e in report.errors["nb"]}) > 1


def test_report_files(tmp_path):
    report = run_benchmark(_small_settings(), reps=2, workers=1, title="t")
    paths = write_report(report, tmp_path / "out")
    report_csv = (tmp_path / "out" / "report.csv").read_text().splitlines()
    assert report_csv[0] == "method,median_error_pct,robust_se_pct,reps"
    assert len(report_csv) == 3
    timings = (tmp_path / "out" / "timings.csv").read_text().splitlines()
    assert timings[0] == "method,median_seconds,reps"
    raw = (tmp_path / "out" / "errors_raw.csv").read_text().splitlines()
    assert raw[0] == "method,rep,error_pct"
    assert len(raw) == 1 + 2 * 2
    # audit invariant: every error percentage is (misclassified / test size) * 100
    test_size = 2 * 40
    for line in raw[1:]:
        pct = float(line.split(",")[2])
        count = pct * test_size / 100.0
        assert count == pytest.approx(round(count), abs=1e-9)
    assert "1.4826*MAD" in (tmp_path / "out" / "report.txt").read_text()
    assert set(paths) == {"report.csv", "timings.csv", "errors_raw.csv", "report.txt"}


def test_split_benchmark_mode():
    s = rng.stream(0, "bench-real")
    X = np.vstack([s.standard_normal((60, 4)), s.standard_normal((60, 4)) + 2.0])
    y = np.array([0] * 60 + [1] * 60)
    settings = BenchSettings(
        methods=("plr",),
        seed=3,
        features=X,
        labels=y,
        train_fraction=0.5,
        path_length=30,
    )
    report = run_benchmark(settings, reps=2, workers=1)
    assert report.errors["plr"].shape == (2,)
    assert np.all(report.errors["plr"] <= 0.2)  # classes are well separated


def test_settings_validation():
    with pytest.raises(ConfigError):
        BenchSettings(methods=(), seed=0, example="ex1")
    with pytest.raises(ConfigError):
        BenchSettings(methods=("svm",), seed=0, example="ex1")
    with pytest.raises(ConfigError):
        BenchSettings(methods=("fans", "fans"), seed=0, example="ex1")
    with pytest.raises(ConfigError):
        BenchSettings(methods=("fans",), seed=0)  # no source
    with pytest.raises(ConfigError):
        BenchSettings(
            methods=("fans",),
            seed=0,
            features=np.zeros((4, 2)),
            labels=np.array([0, 0, 1, 1]),
        )  # missing train fraction
    with pytest.raises(ConfigError):
        run_benchmark(_small_settings(), reps=0)
