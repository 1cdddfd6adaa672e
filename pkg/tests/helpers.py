import numpy as np

from ricpricing import Dataset, Predictor


def identity_predictor():
    return Predictor("linear", 1, weights=[1.0], intercept=0.0)


def pairwise_cost(segment):
    """sqrt(sum_{i,i'} (y_i - y_i')^2) by direct enumeration."""
    y = np.asarray(segment, dtype=float)
    return float(np.sqrt(sum((a - b) ** 2 for a in y for b in y)))


def grid_best_revenue(bids, step_frac=1e-4):
    """Best mean revenue over a dense price grid."""
    bids = np.asarray(bids, dtype=float)
    grid = np.arange(0.0, bids.max() + step_frac * bids.max(), step_frac * bids.max())
    rev = (grid[:, None] * (bids[None, :] >= grid[:, None])).mean(axis=1)
    return float(rev.max())


def direct_offset_revenue(t, predictions, bids):
    price = np.maximum(np.asarray(predictions) - t, 0.0)
    return float(np.where(np.asarray(bids) >= price, price, 0.0).sum())


def make_dataset(predictions, bids):
    """1-d dataset whose single feature is the prediction itself."""
    return Dataset(np.asarray(predictions, dtype=float).reshape(-1, 1), bids)
