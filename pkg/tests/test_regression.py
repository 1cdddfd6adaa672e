import numpy as np
import pytest

from helpers import make_dataset
from ricpricing import (Dataset, Predictor, ValidationError, empirical_stats,
                        fit_linear_least_squares, squared_loss)
from ricpricing.io import dumps_predictor, loads_predictor


def test_exact_line():
    h = fit_linear_least_squares(make_dataset([1, 2], [2, 4]), ridge=0)
    assert h.weights == pytest.approx((2.0,))
    assert h.intercept == pytest.approx(0.0, abs=1e-12)


def test_constant_target():
    h = fit_linear_least_squares(make_dataset([0, 1], [1, 1]), ridge=0)
    assert h.weights == pytest.approx((0.0,), abs=1e-12)
    assert h.intercept == pytest.approx(1.0)


def test_recovers_noisy_weights(rng):
    X = rng.uniform(0, 1, (100, 2))
    b = X @ np.ones(2) + rng.normal(0, 0.01, 100) + 1.0  # keep bids >= 0
    h = fit_linear_least_squares(Dataset(X, b), ridge=0)
    # Independent solve: least squares via SVD.
    A = np.hstack([np.ones((100, 1)), X])
    ref = np.linalg.lstsq(A, b, rcond=None)[0]
    assert np.allclose(h.weights, ref[1:], atol=1e-9)
    assert np.allclose(h.weights, [1, 1], atol=0.02)


def test_singular_without_ridge():
    X = np.ones((5, 1))
    with pytest.raises(ValidationError, match="ridge > 0"):
        fit_linear_least_squares(Dataset(X, np.arange(5.0)), ridge=0)
    h = fit_linear_least_squares(Dataset(X, np.arange(5.0)), ridge=1e-6)
    assert np.allclose(h.predict(X), 2.0, atol=1e-5)


def test_least_squares_optimality(rng):
    X = rng.lognormal(0, 0.5, (200, 3))
    b = np.maximum(X.sum(1) + rng.normal(0, 1, 200), 0)
    ridge = 0.5
    h = fit_linear_least_squares(Dataset(X, b), ridge=ridge)

    def objective(w0, w):
        return np.sum((X @ w + w0 - b) ** 2) + ridge * np.sum(w**2)

    w = np.array(h.weights)
    base = objective(h.intercept, w)
    for j in range(4):
        for eps in (1e-3, -1e-3):
            w0, wp = h.intercept, w.copy()
            if j == 0:
                w0 += eps
            else:
                wp[j - 1] += eps
            assert objective(w0, wp) >= base


def test_duplicated_data_same_fit(rng):
    X = rng.uniform(0, 2, (50, 2))
    b = X.sum(1) + rng.uniform(0, 1, 50)
    a = fit_linear_least_squares(Dataset(X, b), ridge=0)
    d = fit_linear_least_squares(Dataset(np.vstack([X, X]), np.r_[b, b]), ridge=0)
    assert np.allclose(a.weights, d.weights, rtol=1e-10)
    assert a.intercept == pytest.approx(d.intercept, rel=1e-10)


def test_squared_loss_cases(rng):
    X = rng.uniform(0, 1, (30, 1))
    b = 3 * X[:, 0] + 0.5
    ds = Dataset(X, b)
    perfect = Predictor("linear", 1, weights=[3.0], intercept=0.5)
    assert squared_loss(perfect, ds).squared_loss == pytest.approx(0, abs=1e-28)
    shifted = Predictor("linear", 1, weights=[3.0], intercept=0.6)
    rep = squared_loss(shifted, ds)
    assert rep.squared_loss == pytest.approx(0.01)
    assert rep.rmse == pytest.approx(0.1)
    const = Predictor.constant(empirical_stats(ds).mean_bid, 1)
    assert squared_loss(const, ds).squared_loss == pytest.approx(empirical_stats(ds).variance)


def test_serialisation_round_trip(rng):
    X = rng.uniform(0, 1, (20, 3))
    h = fit_linear_least_squares(Dataset(X, X.sum(1)))
    back = loads_predictor(dumps_predictor(h))
    assert back == h
    assert np.array_equal(back.predict(X), h.predict(X))
    c = Predictor.constant(2.5, 3)
    assert loads_predictor(dumps_predictor(c)) == c


def test_external_table():
    X = np.array([[0.1, 0.2], [0.3, 0.4]])
    h = Predictor.from_table(X, [5.0, 7.0])
    assert h.predict(X).tolist() == [5.0, 7.0]
    back = loads_predictor(dumps_predictor(h))
    assert back.predict(X[::-1]).tolist() == [7.0, 5.0]
    with pytest.raises(ValidationError):
        h.predict(np.array([[9.0, 9.0]]))
