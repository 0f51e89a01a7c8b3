"""Log-density-ratio feature augmentation.

Each raw coordinate x_j is mapped to z_j = log f1_j(x_j) - log f0_j(x_j),
the log ratio of the two class-conditional marginal density estimates.
The ``plain`` variant keeps only the transformed block; the ``with_raw``
variant appends the original features after it, which lets coordinates
with no marginal signal still enter a downstream linear fit.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from .errors import EmptyClassError, InvalidDataError, ShapeError
from .kde import BandwidthRule, MarginalDensityEstimate, eval_log_density, fit_kde


class Variant(str, Enum):
    """Augmentation variant: transformed only, or transformed + raw."""

    FANS = "fans"
    FANS2 = "fans2"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        try:
            return cls(text.lower())
        except ValueError:
            raise ShapeError(f"unknown variant {text!r}") from None

    @property
    def with_raw(self) -> bool:
        return self is Variant.FANS2

    def output_dim(self, p: int) -> int:
        return 2 * p if self.with_raw else p


@dataclass(frozen=True)
class DensityPair:
    """Per-feature density estimates for class 1 (``class1``) and class 0."""

    class1: Tuple[MarginalDensityEstimate, ...]
    class0: Tuple[MarginalDensityEstimate, ...]

    def __post_init__(self):
        object.__setattr__(self, "class1", tuple(self.class1))
        object.__setattr__(self, "class0", tuple(self.class0))
        if len(self.class1) != len(self.class0):
            raise ShapeError("class1 and class0 estimate lists differ in length")
        if len(self.class1) == 0:
            raise ShapeError("density pair needs at least one feature")

    @property
    def p(self) -> int:
        return len(self.class1)

    def swapped(self) -> "DensityPair":
        return DensityPair(class1=self.class0, class0=self.class1)


def fit_density_pair(
    features: np.ndarray, labels: np.ndarray, rule: BandwidthRule, floor: float
) -> DensityPair:
    """Fit one KDE per feature per class; bandwidths use each class's size."""
    features = _check_matrix(features, features.shape[1] if features.ndim == 2 else -1)
    labels = np.asarray(labels)
    if labels.shape != (features.shape[0],):
        raise ShapeError("labels must have one entry per row")
    per_class = []
    for c in (1, 0):
        rows = features[labels == c]
        if rows.shape[0] == 0:
            raise EmptyClassError(f"class {c} has no rows to estimate densities from")
        per_class.append(
            tuple(fit_kde(rows[:, j], rule, floor) for j in range(features.shape[1]))
        )
    return DensityPair(class1=per_class[0], class0=per_class[1])


def log_ratio_matrix(X: np.ndarray, dp: DensityPair) -> np.ndarray:
    """n x p matrix of per-feature log density ratios."""
    X = _check_matrix(X, dp.p)
    out = np.empty_like(X)
    for j in range(dp.p):
        col = X[:, j]
        out[:, j] = eval_log_density(dp.class1[j], col) - eval_log_density(
            dp.class0[j], col
        )
    return out


def augment_matrix(X: np.ndarray, dp: DensityPair, variant: Variant) -> np.ndarray:
    """Row-wise augmentation; transformed block first, raw block second."""
    X = _check_matrix(X, dp.p)
    Z = log_ratio_matrix(X, dp)
    if variant.with_raw:
        return np.hstack([Z, X])
    return Z


def augment_row(x, dp: DensityPair, variant: Variant) -> np.ndarray:
    """Augment a single observation (same code path as the matrix form)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError(f"expected a 1-D row, got ndim={x.ndim}")
    return augment_matrix(x[np.newaxis, :], dp, variant)[0]


def _check_matrix(X, p: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={X.ndim}")
    if X.shape[1] != p:
        raise ShapeError(f"matrix has {X.shape[1]} columns, densities expect {p}")
    if X.size and not np.all(np.isfinite(X)):
        raise InvalidDataError("features must be finite")
    return X
