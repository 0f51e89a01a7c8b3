import time

import numpy as np
import pytest

import fans
from fans import classifier, plr, rng
from fans.classifier import (
    FansConfig,
    FansModel,
    SubModel,
    majority_vote_predict,
    make_splits,
    predict,
    predict_proba,
    train,
)
from fans.errors import ConfigError, ShapeError, StratificationError
from fans.kde import BandwidthRule, fit_kde
from fans.transform import DensityPair, Variant, augment_matrix, fit_density_pair


def _tiny_dataset(seed=8, n=30, p=10):
    spec = fans.SimSpec(example="ex1", p=p, n_per_class=n, n_test_per_class=20, rho=0.0, seed=seed)
    return fans.generate(spec)


def _constant_prob_model(intercepts, p=1):
    """Ensemble whose sub-model l always outputs sigmoid(intercepts[l])."""
    est = fit_kde([0.0], BandwidthRule.fixed(1.0), floor=1e-2)
    dp = DensityPair(class1=(est,) * p, class0=(est,) * p)  # ratios cancel
    subs = [
        SubModel(densities=dp, model=plr.PlrModel(intercept=b0, coefficients=np.zeros(p), lam=0.1))
        for b0 in intercepts
    ]
    cfg = FansConfig(n_splits=len(subs), paired=len(subs) % 2 == 0, seed=0)
    return FansModel(config=cfg, feature_count=p, submodels=subs)


# --- config ----------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ConfigError):
        FansConfig(n_splits=3)  # paired splitting needs an even count
    FansConfig(n_splits=3, paired=False)
    with pytest.raises(ConfigError):
        FansConfig(n_splits=0, paired=False)
    with pytest.raises(ConfigError):
        FansConfig(floor=0.0)
    with pytest.raises(ConfigError):
        FansConfig(cv_folds=1)


# --- splits ----------------------------------------------------------------


def test_make_splits_minimal():
    labels = np.array([0, 0, 1, 1])
    plan = make_splits(4, labels, 2, seed=1)
    assert len(plan) == 2
    (a1, a2), (b1, b2) = plan.parts
    assert np.array_equal(b1, a2) and np.array_equal(b2, a1)
    for part in (a1, a2):
        assert part.size == 2
        assert set(labels[part]) == {0, 1}
    assert sorted(np.concatenate([a1, a2]).tolist()) == [0, 1, 2, 3]


def test_make_splits_deterministic():
    labels = np.array([0] * 10 + [1] * 14)
    p1 = make_splits(24, labels, 6, seed=42)
    p2 = make_splits(24, labels, 6, seed=42)
    for (a1, a2), (b1, b2) in zip(p1.parts, p2.parts):
        assert np.array_equal(a1, b1) and np.array_equal(a2, b2)
    p3 = make_splits(24, labels, 6, seed=43)
    assert any(
        not np.array_equal(a1, b1) for (a1, _), (b1, _) in zip(p1.parts, p3.parts)
    )


def test_make_splits_paper_scale_regime():
    # 600 rows, 300 per class: every part has 300 rows, pairs swap roles
    labels = np.array([0] * 300 + [1] * 300)
    plan = make_splits(600, labels, 20, seed=0)
    assert len(plan) == 20
    for k in range(0, 20, 2):
        first, second = plan.parts[k], plan.parts[k + 1]
        assert first[0].size == 300 and first[1].size == 300
        assert np.array_equal(first[0], second[1])
        assert np.array_equal(first[1], second[0])
        assert (labels[first[0]] == 1).sum() == 150


def test_make_splits_partition_property():
    labels = np.array([0] * 7 + [1] * 6)
    plan = make_splits(13, labels, 4, seed=5)
    for part1, part2 in plan.parts:
        merged = np.sort(np.concatenate([part1, part2]))
        assert np.array_equal(merged, np.arange(13))
        assert set(labels[part1]) == {0, 1}
        assert set(labels[part2]) == {0, 1}


def test_make_splits_errors():
    with pytest.raises(StratificationError):
        make_splits(5, np.array([0, 0, 0, 0, 1]), 2, seed=0)  # class 1 too small
    with pytest.raises(ConfigError):
        make_splits(8, np.array([0, 1] * 4), 3, seed=0)  # odd L while paired
    with pytest.raises(StratificationError):
        make_splits(3, np.array([0, 1, 1]), 2, seed=0)  # n < 4


# --- training --------------------------------------------------------------


def test_single_split_composition_identity():
    train_ds, test_ds = _tiny_dataset()
    cfg = FansConfig(n_splits=1, paired=False, seed=17, workers=1)
    model = train(train_ds, cfg)
    plan = make_splits(train_ds.n, train_ds.labels, 1, 17, paired=False)
    ((part1, part2),) = plan.parts
    dp = fit_density_pair(train_ds.features[part1], train_ds.labels[part1], cfg.bandwidth, cfg.floor)
    Z2 = augment_matrix(train_ds.features[part2], dp, cfg.variant)
    manual, _ = plr.fit_cv(
        Z2,
        train_ds.labels[part2].astype(float),
        T=cfg.path_length,
        ratio=cfg.path_ratio,
        K=cfg.cv_folds,
        seed=rng.derive_seed(17, "cv", 0),
    )
    auto = predict_proba(model, test_ds.features)
    by_hand = plr.predict_prob(manual, augment_matrix(test_ds.features, dp, cfg.variant))
    assert np.array_equal(auto, by_hand)


def test_identical_class_distributions_predict_near_half():
    s = rng.stream(0, "degenerate")
    X = s.standard_normal((100, 5))
    data = fans.Dataset(features=np.vstack([X, X]), labels=np.array([0] * 100 + [1] * 100))
    model = train(data, FansConfig(n_splits=4, seed=3, workers=1))
    probs = predict_proba(model, s.standard_normal((50, 5)))
    assert np.max(np.abs(probs - 0.5)) <= 0.1


def test_schedule_independence():
    train_ds, test_ds = _tiny_dataset(seed=4)
    cfg1 = FansConfig(n_splits=4, seed=5, workers=1)
    cfg2 = FansConfig(n_splits=4, seed=5, workers=2)
    probs1 = predict_proba(train(train_ds, cfg1), test_ds.features)
    probs2 = predict_proba(train(train_ds, cfg2), test_ds.features)
    assert np.array_equal(probs1, probs2)


def test_swap_symmetry():
    train_ds, test_ds = _tiny_dataset(seed=11, n=24)
    flipped = fans.Dataset(features=train_ds.features, labels=1 - train_ds.labels)
    cfg = FansConfig(n_splits=4, seed=5, workers=1)
    probs = predict_proba(train(train_ds, cfg), test_ds.features)
    probs_flipped = predict_proba(train(flipped, cfg), test_ds.features)
    assert np.max(np.abs(probs + probs_flipped - 1.0)) <= 1e-12


def test_fans2_dimensions():
    train_ds, test_ds = _tiny_dataset(seed=2, n=20)
    model = train(train_ds, FansConfig(variant=Variant.FANS2, n_splits=2, seed=1, workers=1))
    assert model.submodels[0].model.q == 2 * train_ds.p
    probs = predict_proba(model, test_ds.features)
    assert probs.shape == (test_ds.n,)


def test_train_requires_labels_and_classes():
    with pytest.raises(fans.errors.InvalidDataError):
        train(fans.Dataset(features=np.zeros((6, 2))), FansConfig(n_splits=2))
    data = fans.Dataset(features=np.zeros((6, 2)), labels=np.zeros(6, dtype=int))
    with pytest.raises(fans.errors.EmptyClassError):
        train(data, FansConfig(n_splits=2))


def test_doubling_splits_roughly_doubles_work():
    train_ds, _ = _tiny_dataset(seed=6, n=40)

    def measure(L):
        best = float("inf")
        for _ in range(2):
            t0 = time.perf_counter()
            train(train_ds, FansConfig(n_splits=L, seed=9, workers=1))
            best = min(best, time.perf_counter() - t0)
        return best

    t4, t8 = measure(4), measure(8)
    # work is linear in the split count; slack covers per-split variation
    # in solver depth and timer noise
    assert t8 <= 2.0 * t4 * 1.6


# --- prediction ------------------------------------------------------------


def test_predict_proba_is_submodel_average():
    model = _constant_prob_model([1.0, -2.0])
    X = np.zeros((3, 1))
    sig = lambda t: 1.0 / (1.0 + np.exp(-t))
    expected = (sig(1.0) + sig(-2.0)) / 2.0
    assert predict_proba(model, X) == pytest.approx([expected] * 3, abs=1e-15)
    # sub-model probabilities 0.6 and 0.2 average to 0.4
    logit = lambda p: np.log(p / (1 - p))
    mix = _constant_prob_model([logit(0.6), logit(0.2)])
    assert predict_proba(mix, X) == pytest.approx([0.4] * 3, abs=1e-12)
    # unanimous 1/2 stays exactly 1/2, and a single split passes through
    assert predict_proba(_constant_prob_model([0.0, 0.0]), X).tolist() == [0.5] * 3
    single = _constant_prob_model([1.0])
    assert predict_proba(single, X) == pytest.approx([sig(1.0)] * 3, abs=1e-15)


def test_tie_at_half_goes_to_class_one():
    model = _constant_prob_model([0.0, 0.0])  # every probability exactly 1/2
    assert predict(model, np.zeros((4, 1))).tolist() == [1, 1, 1, 1]


def test_just_below_half_goes_to_class_zero():
    eps_logit = -4e-4  # sigmoid(-4e-4) ~ 0.4999
    model = _constant_prob_model([eps_logit, eps_logit])
    assert predict(model, np.zeros((2, 1))).tolist() == [0, 0]


def test_predict_matches_thresholded_probabilities():
    train_ds, test_ds = _tiny_dataset(seed=13, n=20)
    model = train(train_ds, FansConfig(n_splits=2, seed=2, workers=1))
    probs = predict_proba(model, test_ds.features)
    assert np.array_equal(predict(model, test_ds.features), (probs >= 0.5).astype(int))


def test_majority_vote_rules():
    # decisions (1, 0): even tie goes to class 1
    assert majority_vote_predict(_constant_prob_model([2.0, -2.0]), np.zeros((1, 1))).tolist() == [1]
    # decisions (1, 0, 0): majority class 0
    m3 = _constant_prob_model([2.0, -2.0, -1.0])
    assert majority_vote_predict(m3, np.zeros((1, 1))).tolist() == [0]
    # single split: identical to predict
    m1 = _constant_prob_model([0.7])
    X = np.zeros((2, 1))
    assert np.array_equal(majority_vote_predict(m1, X), predict(m1, X))


def test_empty_prediction_input():
    model = _constant_prob_model([1.0])
    assert predict(model, np.empty((0, 1))).shape == (0,)


def test_prediction_shape_errors():
    model = _constant_prob_model([1.0])
    with pytest.raises(ShapeError):
        predict_proba(model, np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        predict_proba(model, np.zeros(4))
