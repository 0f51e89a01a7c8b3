"""Reference classifiers sharing the package machinery.

Nonparametric Naive Bayes scores an observation by the sum of per-feature
log density ratios plus the log prior odds; it is exactly the transformed
model with every slope fixed at one, so comparing it against the learned-
coefficient classifier isolates the value of the selection step. The raw
penalized logistic regression baseline runs the path solver directly on
the untransformed features.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import plr
from .data import Dataset
from .errors import EmptyClassError, InvalidDataError
from .kde import DEFAULT_FLOOR, BandwidthRule
from .transform import DensityPair, Variant, augment_matrix, fit_density_pair


@dataclass
class NbModel:
    densities: DensityPair
    log_prior_odds: float

    def __post_init__(self):
        if not math.isfinite(self.log_prior_odds):
            raise InvalidDataError("log prior odds must be finite")


def fit_nb(
    data: Dataset,
    bandwidth: BandwidthRule = None,
    floor: float = DEFAULT_FLOOR,
    balanced_prior: bool = False,
) -> NbModel:
    """Per-class per-feature KDE on all rows; prior odds from class counts."""
    if data.labels is None:
        raise InvalidDataError("training data needs labels")
    n0, n1 = data.class_counts()
    if n0 == 0 or n1 == 0:
        raise EmptyClassError("both classes are required")
    bandwidth = bandwidth or BandwidthRule.theory()
    dp = fit_density_pair(data.features, data.labels, bandwidth, floor)
    lpo = 0.0 if balanced_prior else math.log(n1 / n0)
    return NbModel(densities=dp, log_prior_odds=lpo)


def nb_score(model: NbModel, X) -> np.ndarray:
    """Sum of log density ratios plus log prior odds, per row."""
    Z = augment_matrix(np.asarray(X, dtype=np.float64), model.densities, Variant.FANS)
    return Z.sum(axis=1) + model.log_prior_odds


def predict_nb(model: NbModel, X) -> np.ndarray:
    """Class 1 iff the score is >= 0 (same tie convention as the ensemble)."""
    return (nb_score(model, X) >= 0.0).astype(np.int64)


def fit_plr_raw(
    data: Dataset,
    T: int = plr.DEFAULT_PATH_LENGTH,
    ratio: float = plr.DEFAULT_PATH_RATIO,
    K: int = 5,
    seed: int = 0,
) -> plr.PlrModel:
    """Cross-validated penalized logistic regression on the raw features."""
    if data.labels is None:
        raise InvalidDataError("training data needs labels")
    model, _ = plr.fit_cv(
        data.features, data.labels.astype(np.float64), T=T, ratio=ratio, K=K, seed=seed
    )
    return model
