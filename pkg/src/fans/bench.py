"""Benchmark harness: repeated train/test runs with report emission.

Each repetition draws fresh data from a rep-keyed stream, trains the
requested methods, and records test error and wall time. The
classification content of a run (per-rep errors, medians, spreads) is
fully deterministic given the flags, and independent of the worker count;
wall times are measured and reported separately because they can never
be.
"""

import math
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import baselines, classifier, plr, rng, simgen
from .data import Dataset
from .errors import ConfigError, StratificationError
from .kde import DEFAULT_FLOOR, BandwidthRule
from .parallel import ordered_map
from .transform import Variant

METHODS = ("fans", "fans2", "plr", "nb")

# MAD scale factor that makes the robust spread estimate consistent with
# the standard deviation under normality.
MAD_TO_SD = 1.4826


def compute_metrics(per_rep_errors, se: str = "mad") -> Tuple[float, float]:
    """Median and a spread estimate of the per-repetition errors.

    ``mad`` (default) returns 1.4826 * MAD / sqrt(R); ``sd`` returns the
    sample standard deviation / sqrt(R).
    """
    errors = np.asarray(per_rep_errors, dtype=np.float64)
    if errors.ndim != 1 or errors.size == 0:
        raise ConfigError("need at least one repetition")
    median = float(np.median(errors))
    R = errors.size
    if se == "mad":
        spread = MAD_TO_SD * float(np.median(np.abs(errors - median))) / math.sqrt(R)
    elif se == "sd":
        spread = float(errors.std(ddof=1)) / math.sqrt(R) if R > 1 else 0.0
    else:
        raise ConfigError(f"unknown spread flavor {se!r}")
    return median, spread


@dataclass(frozen=True)
class BenchSettings:
    """Everything a repetition needs besides its rep index."""

    methods: Tuple[str, ...]
    seed: int
    # simulated source
    example: Optional[str] = None
    p: int = 10
    n_per_class: int = 100
    n_test_per_class: Optional[int] = None
    rho: float = 0.0
    # real-data source (mutually exclusive with example)
    features: Optional[np.ndarray] = None
    labels: Optional[np.ndarray] = None
    train_fraction: Optional[float] = None
    # model knobs
    n_splits: int = classifier.DEFAULT_SPLITS
    floor: float = DEFAULT_FLOOR
    bandwidth: BandwidthRule = field(default_factory=BandwidthRule.theory)
    path_length: int = plr.DEFAULT_PATH_LENGTH
    path_ratio: float = plr.DEFAULT_PATH_RATIO
    cv_folds: int = 5

    def __post_init__(self):
        if not self.methods:
            raise ConfigError("need at least one method")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r} (choose from {METHODS})")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("duplicate method names")
        if (self.example is None) == (self.features is None):
            raise ConfigError("exactly one of example / data source is required")
        if self.features is not None:
            if self.train_fraction is None or not (0.0 < self.train_fraction < 1.0):
                raise ConfigError("data source needs a train fraction in (0, 1)")


@dataclass
class BenchReport:
    methods: Tuple[str, ...]
    errors: Dict[str, np.ndarray]  # per-rep test-error fractions
    seconds: Dict[str, np.ndarray]
    reps: int
    se_flavor: str = "mad"
    title: str = ""

    def metric_rows(self) -> List[Tuple[str, float, float, float]]:
        rows = []
        for m in self.methods:
            median, spread = compute_metrics(self.errors[m], se=self.se_flavor)
            rows.append((m, 100.0 * median, 100.0 * spread, float(np.median(self.seconds[m]))))
        return rows


def _rep_datasets(settings: BenchSettings, rep_seed: int) -> Tuple[Dataset, Dataset]:
    if settings.example is not None:
        spec = simgen.SimSpec(
            example=settings.example,
            p=settings.p,
            n_per_class=settings.n_per_class,
            n_test_per_class=settings.n_test_per_class or settings.n_per_class,
            rho=settings.rho,
            seed=rep_seed,
        )
        return simgen.generate(spec)
    return _stratified_fraction_split(
        settings.features, settings.labels, settings.train_fraction, rep_seed
    )


def _stratified_fraction_split(
    features: np.ndarray, labels: np.ndarray, fraction: float, rep_seed: int
) -> Tuple[Dataset, Dataset]:
    """Per-class random split into train (given fraction) and test (rest)."""
    stream = rng.stream(rep_seed, "protocol-split")
    train_idx: List[np.ndarray] = []
    test_idx: List[np.ndarray] = []
    for c in (0, 1):
        members = np.flatnonzero(labels == c)
        if members.size < 2:
            raise StratificationError(f"class {c} has fewer than 2 rows")
        order = stream.permutation(members)
        k = int(round(fraction * members.size))
        k = min(max(k, 1), members.size - 1)
        train_idx.append(order[:k])
        test_idx.append(order[k:])
    tr = np.sort(np.concatenate(train_idx))
    te = np.sort(np.concatenate(test_idx))
    return (
        Dataset(features=features[tr], labels=labels[tr]),
        Dataset(features=features[te], labels=labels[te]),
    )


def _fit_and_score(
    method: str, train: Dataset, test: Dataset, settings: BenchSettings, rep_seed: int
) -> Tuple[float, float]:
    start = time.perf_counter()
    if method in ("fans", "fans2"):
        cfg = classifier.FansConfig(
            variant=Variant.FANS if method == "fans" else Variant.FANS2,
            n_splits=settings.n_splits,
            floor=settings.floor,
            bandwidth=settings.bandwidth,
            path_length=settings.path_length,
            path_ratio=settings.path_ratio,
            cv_folds=settings.cv_folds,
            seed=rng.derive_seed(rep_seed, "train-" + method),
            workers=1,  # the rep pool owns the worker budget
        )
        model = classifier.train(train, cfg)
        predictions = classifier.predict(model, test.features)
    elif method == "plr":
        model = baselines.fit_plr_raw(
            train,
            T=settings.path_length,
            ratio=settings.path_ratio,
            K=settings.cv_folds,
            seed=rng.derive_seed(rep_seed, "train-plr"),
        )
        predictions = (plr.predict_prob(model, test.features) >= 0.5).astype(np.int64)
    else:
        model = baselines.fit_nb(train, settings.bandwidth, settings.floor)
        predictions = baselines.predict_nb(model, test.features)
    error = float((predictions != test.labels).mean())
    return error, time.perf_counter() - start


def _run_rep(task) -> Dict[str, Tuple[float, float]]:
    settings, rep = task
    rep_seed = rng.derive_seed(settings.seed, "rep", rep)
    train, test = _rep_datasets(settings, rep_seed)
    return {
        m: _fit_and_score(m, train, test, settings, rep_seed) for m in settings.methods
    }


def run_benchmark(
    settings: BenchSettings,
    reps: int,
    workers: Optional[int] = None,
    title: str = "",
    se_flavor: str = "mad",
) -> BenchReport:
    if reps < 1:
        raise ConfigError("need at least one repetition")
    results = ordered_map(
        _run_rep, [(settings, rep) for rep in range(reps)], workers=workers
    )
    errors = {
        m: np.array([res[m][0] for res in results]) for m in settings.methods
    }
    seconds = {
        m: np.array([res[m][1] for res in results]) for m in settings.methods
    }
    return BenchReport(
        methods=settings.methods,
        errors=errors,
        seconds=seconds,
        reps=reps,
        se_flavor=se_flavor,
        title=title,
    )


# ---------------------------------------------------------------------------
# report emission

REPORT_CSV = "report.csv"
TIMINGS_CSV = "timings.csv"
ERRORS_CSV = "errors_raw.csv"
REPORT_TXT = "report.txt"


def write_report(report: BenchReport, out_dir) -> Dict[str, str]:
    """Write report.csv / timings.csv / errors_raw.csv / report.txt.

    report.csv and errors_raw.csv contain only deterministic content;
    measured wall times live in timings.csv and report.txt.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = {name: os.path.join(out_dir, name) for name in
             (REPORT_CSV, TIMINGS_CSV, ERRORS_CSV, REPORT_TXT)}
    rows = report.metric_rows()

    with open(paths[REPORT_CSV], "w", encoding="utf-8") as fh:
        fh.write("method,median_error_pct,robust_se_pct,reps\n")
        for name, med, se, _ in rows:
            fh.write(f"{name},{med!r},{se!r},{report.reps}\n")

    with open(paths[TIMINGS_CSV], "w", encoding="utf-8") as fh:
        fh.write("method,median_seconds,reps\n")
        for name, _, _, sec in rows:
            fh.write(f"{name},{sec!r},{report.reps}\n")

    with open(paths[ERRORS_CSV], "w", encoding="utf-8") as fh:
        fh.write("method,rep,error_pct\n")
        for name in report.methods:
            for rep, err in enumerate(report.errors[name]):
                fh.write(f"{name},{rep},{100.0 * float(err)!r}\n")

    with open(paths[REPORT_TXT], "w", encoding="utf-8") as fh:
        fh.write(format_report(report))
    return paths


def format_report(report: BenchReport) -> str:
    spread_note = (
        "1.4826*MAD/sqrt(R)" if report.se_flavor == "mad" else "sd/sqrt(R)"
    )
    lines = []
    if report.title:
        lines.append(report.title)
    lines.append(f"repetitions: {report.reps}; spread: {spread_note}")
    lines.append(f"{'method':<8}{'median err %':>14}{'spread %':>12}{'median s':>12}")
    for name, med, se, sec in report.metric_rows():
        lines.append(f"{name:<8}{med:>14.1f}{se:>12.2f}{sec:>12.2f}")
    return "\n".join(lines) + "\n"
