import math

import numpy as np
import pytest

import fans
from fans import plr, rng
from fans.baselines import fit_nb, fit_plr_raw, nb_score, predict_nb
from fans.errors import EmptyClassError, InvalidDataError
from fans.kde import BandwidthRule
from fans.transform import Variant, augment_matrix


def _dataset(X0, X1):
    return fans.Dataset(
        features=np.vstack([X0, X1]),
        labels=np.array([0] * len(X0) + [1] * len(X1)),
    )


def _separated_dataset(seed=0, n=40, p=3):
    s = rng.stream(seed, "nb-data")
    X0 = s.standard_normal((n, p))
    X1 = s.standard_normal((n, p))
    X1[:, 0] += 4.0  # only the first feature separates
    return _dataset(X0, X1)


def test_balanced_prior_odds_zero():
    data = _separated_dataset()
    assert fit_nb(data).log_prior_odds == 0.0


def test_prior_odds_from_counts():
    s = rng.stream(1, "nb-data")
    data = _dataset(s.standard_normal((10, 2)), s.standard_normal((20, 2)))
    assert fit_nb(data).log_prior_odds == pytest.approx(math.log(2.0), abs=1e-15)
    assert fit_nb(data, balanced_prior=True).log_prior_odds == 0.0


def test_identical_class_samples_score_is_prior_only():
    s = rng.stream(2, "nb-data")
    X = s.standard_normal((15, 4))
    data = _dataset(X, X)  # same rows in both classes -> identical estimates
    model = fit_nb(data)
    scores = nb_score(model, s.standard_normal((6, 4)))
    assert np.array_equal(scores, np.zeros(6))
    # score exactly 0 classifies as class 1 (the >= convention)
    assert predict_nb(model, s.standard_normal((6, 4))).tolist() == [1] * 6


def test_dominating_feature_decides():
    data = _separated_dataset()
    model = fit_nb(data)
    x_hi = np.zeros((1, 3))
    x_hi[0, 0] = 4.0
    assert predict_nb(model, x_hi).tolist() == [1]
    assert predict_nb(model, np.zeros((1, 3))).tolist() == [0]


def test_nb_equals_fixed_coefficient_submodel():
    data = _separated_dataset(seed=3)
    model = fit_nb(data)
    fixed = plr.PlrModel(
        intercept=model.log_prior_odds,
        coefficients=np.ones(data.p),
        lam=0.0,
    )
    X = rng.stream(4, "nb-data").standard_normal((30, data.p)) * 2
    Z = augment_matrix(X, model.densities, Variant.FANS)
    via_plr = (plr.predict_prob(fixed, Z) >= 0.5).astype(int)
    assert np.array_equal(predict_nb(model, X), via_plr)


def test_feature_permutation_invariance():
    data = _separated_dataset(seed=5)
    perm = np.array([2, 0, 1])
    permuted = fans.Dataset(features=data.features[:, perm], labels=data.labels)
    m = fit_nb(data)
    mp = fit_nb(permuted)
    X = rng.stream(6, "nb-data").standard_normal((25, 3))
    s1 = nb_score(m, X)
    s2 = nb_score(mp, X[:, perm])
    assert np.max(np.abs(s1 - s2)) <= 1e-12
    assert np.array_equal(predict_nb(m, X), predict_nb(mp, X[:, perm]))


def test_single_feature_nb_thresholds_log_ratio():
    data = _separated_dataset(seed=7, p=1)
    model = fit_nb(data)
    X = np.linspace(-3, 7, 21)[:, None]
    ratios = augment_matrix(X, model.densities, Variant.FANS)[:, 0]
    assert np.array_equal(predict_nb(model, X), (ratios >= 0).astype(int))


def test_nb_errors():
    with pytest.raises(InvalidDataError):
        fit_nb(fans.Dataset(features=np.zeros((4, 2))))
    data = fans.Dataset(features=np.zeros((4, 2)), labels=np.zeros(4, dtype=int))
    with pytest.raises(EmptyClassError):
        fit_nb(data)


def test_plr_raw_separable_feature():
    data = _separated_dataset(seed=8, n=50, p=1)
    model = fit_plr_raw(data, seed=2)
    preds = (plr.predict_prob(model, data.features) >= 0.5).astype(int)
    assert (preds != data.labels).mean() <= 0.05


def test_plr_raw_pure_noise_near_chance():
    s = rng.stream(9, "nb-data")
    data = _dataset(s.standard_normal((100, 10)), s.standard_normal((100, 10)))
    model = fit_plr_raw(data, seed=3)
    holdout = _dataset(s.standard_normal((250, 10)), s.standard_normal((250, 10)))
    preds = (plr.predict_prob(model, holdout.features) >= 0.5).astype(int)
    err = (preds != holdout.labels).mean()
    assert abs(err - 0.5) <= 0.15


def test_plr_raw_custom_bandwidth_not_needed():
    # raw baseline ignores densities entirely; smoke the full config surface
    data = _separated_dataset(seed=10, n=30)
    model = fit_plr_raw(data, T=40, ratio=1e-2, K=3, seed=1)
    assert model.q == data.p
