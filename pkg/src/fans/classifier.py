"""Split-averaged classifier built from density transforms and sparse fits.

Training draws L stratified half/half splits of the data (consecutive
splits swap roles, so both halves of each random partition get used for
both jobs). For each split, densities are estimated on part 1, part 2 is
mapped to log-density-ratio features, and a cross-validated L1-penalized
logistic regression is fitted on the transformed part 2. Prediction
averages the L sub-model probabilities and thresholds at 1/2 (ties to
class 1).

Every random draw comes from a stream keyed by (seed, purpose, split), so
training is reproducible and independent of the worker schedule.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import plr, rng
from .data import Dataset
from .parallel import ordered_map
from .errors import (
    ConfigError,
    EmptyClassError,
    InvalidDataError,
    ShapeError,
    StratificationError,
)
from .kde import DEFAULT_FLOOR, BandwidthRule
from .transform import DensityPair, Variant, augment_matrix, fit_density_pair

DEFAULT_SPLITS = 20


@dataclass(frozen=True)
class FansConfig:
    variant: Variant = Variant.FANS
    n_splits: int = DEFAULT_SPLITS
    paired: bool = True
    floor: float = DEFAULT_FLOOR
    bandwidth: BandwidthRule = field(default_factory=BandwidthRule.theory)
    path_length: int = plr.DEFAULT_PATH_LENGTH
    path_ratio: float = plr.DEFAULT_PATH_RATIO
    cv_folds: int = 5
    seed: int = 0
    workers: Optional[int] = None

    def __post_init__(self):
        if self.n_splits < 1:
            raise ConfigError("need at least one split")
        if self.paired and self.n_splits % 2 != 0:
            raise ConfigError(
                "balanced pairing swaps the halves of consecutive splits, "
                "so the split count must be even (or disable pairing)"
            )
        if not (math.isfinite(self.floor) and self.floor > 0):
            raise ConfigError("floor must be positive")
        if self.cv_folds < 2:
            raise ConfigError("cross-validation needs at least 2 folds")


@dataclass(frozen=True)
class SplitPlan:
    """L disjoint (part1, part2) partitions of the row indices."""

    parts: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    n: int

    def __len__(self) -> int:
        return len(self.parts)


@dataclass
class SubModel:
    densities: DensityPair
    model: plr.PlrModel


@dataclass
class FansModel:
    config: FansConfig
    feature_count: int
    submodels: List[SubModel]

    def __post_init__(self):
        if len(self.submodels) != self.config.n_splits:
            raise ShapeError("one sub-model per split required")
        q = self.config.variant.output_dim(self.feature_count)
        for sm in self.submodels:
            if sm.densities.p != self.feature_count or sm.model.q != q:
                raise ShapeError("sub-model dimensions do not match the config")

    @property
    def variant(self) -> Variant:
        return self.config.variant


def make_splits(
    n: int, class_labels, n_splits: int, seed: int, paired: bool = True
) -> SplitPlan:
    """Stratified half/half splits; split 2k is split 2k-1 with parts swapped.

    Per class, one half receives ceil(n_c/2) members and a coin decides
    which; which rows land where depends only on (seed, split index) and
    the class membership, never on the label coding.
    """
    labels = np.asarray(class_labels)
    if labels.shape != (n,):
        raise ShapeError("labels must have one entry per row")
    if n < 4:
        raise StratificationError("need at least 4 rows to split")
    if paired and n_splits % 2 != 0:
        raise ConfigError("paired splitting requires an even split count")
    classes = _canonical_classes(labels)
    for c, members in classes:
        if members.size < 2:
            raise StratificationError(
                f"class {c} has {members.size} member(s); splitting needs >= 2"
            )
    parts: List[Tuple[np.ndarray, np.ndarray]] = []
    draws = n_splits // 2 if paired else n_splits
    for draw in range(draws):
        stream = rng.stream(seed, "split", draw)
        part1: List[np.ndarray] = []
        part2: List[np.ndarray] = []
        for _, members in classes:
            order = stream.permutation(members)
            size1 = members.size // 2
            if stream.integers(0, 2) == 1:
                size1 += members.size % 2
            part1.append(order[:size1])
            part2.append(order[size1:])
        pair = (np.sort(np.concatenate(part1)), np.sort(np.concatenate(part2)))
        parts.append(pair)
        if paired:
            parts.append((pair[1], pair[0]))
    return SplitPlan(parts=tuple(parts), n=n)


def _canonical_classes(labels: np.ndarray):
    """Classes ordered by smallest member index (label-coding independent)."""
    out = []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        out.append((c, members))
    out.sort(key=lambda item: item[1][0])
    return out


def _fit_one_split(task):
    features, labels, part1, part2, config, split_index = task
    dp = fit_density_pair(
        features[part1], labels[part1], config.bandwidth, config.floor
    )
    Z = augment_matrix(features[part2], dp, config.variant)
    model, _ = plr.fit_cv(
        Z,
        labels[part2].astype(np.float64),
        T=config.path_length,
        ratio=config.path_ratio,
        K=config.cv_folds,
        seed=rng.derive_seed(config.seed, "cv", split_index),
    )
    return SubModel(densities=dp, model=model)


def train(data: Dataset, config: FansConfig) -> FansModel:
    """Fit the full L-split ensemble."""
    if data.labels is None:
        raise InvalidDataError("training data needs labels")
    if data.p < 1:
        raise ShapeError("need at least one feature")
    n0, n1 = data.class_counts()
    if min(n0, n1) == 0:
        raise EmptyClassError("both classes are required for training")
    plan = make_splits(
        data.n, data.labels, config.n_splits, config.seed, paired=config.paired
    )
    tasks = [
        (data.features, data.labels, part1, part2, config, l)
        for l, (part1, part2) in enumerate(plan.parts)
    ]
    submodels = ordered_map(_fit_one_split, tasks, workers=config.workers)
    return FansModel(config=config, feature_count=data.p, submodels=submodels)


def predict_proba(model: FansModel, X) -> np.ndarray:
    """Average of the sub-model probabilities, in sub-model index order."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError("expected a 2-D matrix")
    if X.shape[1] != model.feature_count:
        raise ShapeError(
            f"matrix has {X.shape[1]} columns, model expects {model.feature_count}"
        )
    total = np.zeros(X.shape[0])
    for sm in model.submodels:
        Z = augment_matrix(X, sm.densities, model.variant)
        total += plr.predict_prob(sm.model, Z)
    return total / len(model.submodels)


def predict(model: FansModel, X) -> np.ndarray:
    """Class 1 iff the averaged probability is >= 1/2."""
    return (predict_proba(model, X) >= 0.5).astype(np.int64)


def majority_vote_predict(model: FansModel, X) -> np.ndarray:
    """Per-split hard decisions, majority wins; ties go to class 1."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.feature_count:
        raise ShapeError("input does not match the model's feature count")
    votes = np.zeros(X.shape[0], dtype=np.int64)
    for sm in model.submodels:
        Z = augment_matrix(X, sm.densities, model.variant)
        votes += plr.predict_prob(sm.model, Z) >= 0.5
    return (2 * votes >= len(model.submodels)).astype(np.int64)
