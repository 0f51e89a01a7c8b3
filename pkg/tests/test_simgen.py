import math

import numpy as np
import pytest

from fans.errors import ConfigError
from fans.simgen import SimSpec, boundary_statistic, gen_ex1, gen_ex4, generate


def _spec(example, **kw):
    base = dict(p=10, n_per_class=100, n_test_per_class=50, rho=0.0, seed=0)
    base.update(kw)
    return SimSpec(example=example, **base)


def test_same_spec_reproduces_identical_data():
    a_train, a_test = generate(_spec("ex1"))
    b_train, b_test = generate(_spec("ex1"))
    assert np.array_equal(a_train.features, b_train.features)
    assert np.array_equal(a_test.features, b_test.features)
    assert not np.array_equal(a_train.features[: a_test.n], a_test.features)


def test_labels_and_counts():
    train, test = generate(_spec("ex2", rho=0.5))
    assert train.class_counts() == (100, 100)
    assert test.class_counts() == (50, 50)
    assert set(np.unique(train.labels)) == {0, 1}
    assert np.all(np.isfinite(train.features))


# --- ex1: AR(1) Gaussian location shift -------------------------------------


def test_ex1_independent_case():
    train, _ = generate(_spec("ex1", n_per_class=2000, p=12))
    X0 = train.features[train.labels == 0]
    corr = np.corrcoef(X0.T)
    off = corr[~np.eye(12, dtype=bool)]
    assert np.max(np.abs(off)) < 0.1
    diff = train.features[train.labels == 1].mean(0) - X0.mean(0)
    assert np.allclose(diff[:10], 1.0, atol=0.1)
    assert np.allclose(diff[10:], 0.0, atol=0.1)


def test_ex1_ar1_correlation_decay():
    train, _ = generate(_spec("ex1", n_per_class=5000, p=10, rho=0.5))
    X0 = train.features[train.labels == 0]
    r13 = np.corrcoef(X0[:, 0], X0[:, 2])[0, 1]
    assert r13 == pytest.approx(0.25, abs=0.05)
    r12 = np.corrcoef(X0[:, 0], X0[:, 1])[0, 1]
    assert r12 == pytest.approx(0.5, abs=0.05)


# --- ex2: equal correlation --------------------------------------------------


def test_ex2_equal_correlation():
    train, _ = generate(_spec("ex2", n_per_class=2000, rho=0.9))
    X0 = train.features[train.labels == 0]
    corr = np.corrcoef(X0.T)
    off = corr[~np.eye(10, dtype=bool)]
    assert np.all(np.abs(off - 0.9) < 0.03)
    assert np.allclose(X0.var(axis=0), 1.0, atol=0.1)


def test_ex2_rho_zero_equals_ex1_rho_zero():
    # both reduce to the same independent draws from the same stream
    a, _ = generate(_spec("ex1", rho=0.0))
    b, _ = generate(_spec("ex2", rho=0.0))
    assert np.array_equal(a.features, b.features)


# --- ex3: equal means, mixture class -----------------------------------------


def test_ex3_equal_class_means():
    train, _ = generate(_spec("ex3", n_per_class=2000))
    m0 = train.features[train.labels == 0].mean(0)
    m1 = train.features[train.labels == 1].mean(0)
    assert np.allclose(m0[:10], 3.0, atol=0.15)
    assert np.allclose(m1[:10], 3.0, atol=0.15)
    assert np.allclose(m0[10:], 0.0, atol=0.15)


def test_ex3_class0_independent_when_rho_zero():
    train, _ = generate(_spec("ex3", n_per_class=2000))
    X0 = train.features[train.labels == 0]
    corr = np.corrcoef(X0.T)
    assert np.max(np.abs(corr[~np.eye(10, dtype=bool)])) < 0.1


# --- ex4: ball vs shell -------------------------------------------------------


def test_ex4_norm_separation():
    train, test = generate(_spec("ex4", p=5, n_per_class=500))
    for ds in (train, test):
        norms = np.linalg.norm(ds.features, axis=1)
        assert np.all(norms[ds.labels == 0] <= 1.0)
        assert np.all(norms[ds.labels == 1] > 1.0)
        assert np.all(np.abs(ds.features[ds.labels == 1]) <= 1.0)


def test_ex4_ball_radius_law():
    # P(r <= t) = t^p for the uniform ball
    train, _ = generate(_spec("ex4", p=5, n_per_class=5000))
    r = np.linalg.norm(train.features[train.labels == 0], axis=1)
    assert (r <= 0.5).mean() == pytest.approx(0.5**5, abs=0.01)


def test_ex4_cube_rejection_geometry():
    # the generator rejects cube draws inside the ball; at p=2 that
    # region occupies pi/4 of the cube
    from fans import rng

    pts = rng.stream(0, "ex4-geometry").random((5000, 2)) * 2 - 1
    inside = (np.linalg.norm(pts, axis=1) <= 1.0).mean()
    assert inside == pytest.approx(math.pi / 4, abs=0.03)


def test_ex4_p1_rejected():
    with pytest.raises(ConfigError):
        _spec("ex4", p=1)


# --- ex5: non-additive boundary ----------------------------------------------


def test_ex5_hand_labels():
    x = np.zeros((2, 5))
    x[0, 0] = 1.0  # 1 * sqrt(0 + 0 + 1) = 1 >= 0.75
    x[1, 0] = 0.5  # 0.25 < 0.75
    stats = boundary_statistic(x)
    assert stats[0] == 1.0
    assert stats[1] == 0.25
    train, _ = generate(_spec("ex5", p=5))
    assert np.array_equal(
        train.labels, (boundary_statistic(train.features) >= 0.75).astype(int)
    )


def test_ex5_positive_fraction():
    # P(x1^2 sqrt(x2^2 + x3^4 + 1) >= 0.75) = 0.4997 by direct Monte Carlo
    # (2e6 draws from an independent generator)
    train, _ = generate(_spec("ex5", p=5, n_per_class=2500))
    assert train.n == 5000
    frac = train.labels.mean()
    assert frac == pytest.approx(0.50, abs=0.05)


def test_ex5_needs_three_coordinates():
    with pytest.raises(ConfigError):
        _spec("ex5", p=2)


# --- intro example ------------------------------------------------------------


def test_intro_masked_mixture_moments():
    train, _ = generate(_spec("intro", n_per_class=2000))
    X1 = train.features[train.labels == 1]
    # per coordinate: 0.5 * N(0,1) + 0.5 * N(6,1) -> mean 3, var 10
    assert np.allclose(X1[:, :10].mean(0), 3.0, atol=0.15)
    assert np.allclose(X1[:, :10].var(0), 10.0, atol=1.0)
    assert np.allclose(X1[:, 10:].mean(0), 0.0, atol=0.15)
    X0 = train.features[train.labels == 0]
    assert np.allclose(X0[:, :10].mean(0), 5.0, atol=0.15)


# --- validation ----------------------------------------------------------------


def test_named_generators_dispatch():
    spec = _spec("ex4", p=3)
    a, _ = generate(spec)
    b, _ = gen_ex4(spec)
    assert np.array_equal(a.features, b.features)
    with pytest.raises(ConfigError):
        gen_ex1(spec)


def test_spec_validation():
    with pytest.raises(ConfigError):
        _spec("ex9")
    with pytest.raises(ConfigError):
        _spec("ex1", p=5)
    with pytest.raises(ConfigError):
        _spec("ex1", rho=1.0)
    with pytest.raises(ConfigError):
        _spec("ex1", n_per_class=0)
