"""Reserve functions built from a bid predictor.

* :func:`ric_h` clusters the prediction axis into ``k`` minimum-spread
  cells and prices each cell at its empirical monopoly reserve.
* :func:`offset_reserve_fit` subtracts one learned offset from every
  prediction.
* :func:`empirical_optimal_reserve` is the single-price baseline.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, PiecewiseReserve, ValidationError, revenue
from .partition import optimal_partitions
from .regression import Predictor


@dataclass(frozen=True)
class QuantizationConfig:
    buckets: int
    range_low: float
    range_high: float

    def __post_init__(self):
        if self.buckets < 1:
            raise ValidationError("buckets must be >= 1")
        if not self.range_low < self.range_high:
            raise ValidationError("range_low must be < range_high")

    @property
    def width(self) -> float:
        return (self.range_high - self.range_low) / self.buckets

    def bucket_index(self, values) -> np.ndarray:
        v = np.clip(np.asarray(values, dtype=float), self.range_low, self.range_high)
        idx = np.floor((v - self.range_low) * self.buckets / (self.range_high - self.range_low))
        return np.clip(idx, 0, self.buckets - 1).astype(np.int64)

    def edge(self, i) -> np.ndarray:
        return self.range_low + np.asarray(i) * (self.range_high - self.range_low) / self.buckets


# 1000 buckets over [0, 50], the synthetic-experiment setting.
DEFAULT_QUANTIZATION = QuantizationConfig(1000, 0.0, 50.0)


@dataclass(frozen=True)
class OffsetReserve:
    """The rule ``x -> max(h(x) - offset, 0)``."""

    offset: float
    predictor_id: str = ""

    def __post_init__(self):
        if not self.offset >= 0:
            raise ValidationError("offset must be >= 0")

    def prices(self, predictions) -> np.ndarray:
        return np.maximum(np.asarray(predictions, dtype=float) - self.offset, 0.0)


def quantize(values, quant: QuantizationConfig) -> np.ndarray:
    """Clamp to the range, then snap to the midpoint of the enclosing bucket."""
    return quant.edge(quant.bucket_index(values) + 0.5)


def _reserve_totals(bids):
    b = np.sort(np.asarray(bids, dtype=float))
    above = b.size - np.searchsorted(b, b, side="left")
    return b, b * above


def empirical_optimal_reserve(bids) -> tuple[float, float]:
    """Price ``r`` maximising ``r * #{b_i >= r}``; lowest price on ties.

    Only bid values need checking: between consecutive bids the objective
    rises linearly and drops right after each bid.
    """
    bids = np.asarray(bids, dtype=float).reshape(-1)
    if bids.size == 0:
        raise ValidationError("empty bid list")
    b, totals = _reserve_totals(bids)
    i = int(np.argmax(totals))  # first maximum = lowest price since b is ascending
    return float(b[i]), float(totals[i] / bids.size)


def _cell_centres(thresholds):
    t = np.asarray(thresholds, dtype=float)
    if t.size == 0:
        return np.zeros(1)
    inner = 0.5 * (t[:-1] + t[1:])
    return np.r_[t[0], inner, t[-1]]


def fit_cell_reserves(thresholds, predictions, bids, predictor_id: str = "") -> PiecewiseReserve:
    """Empirical optimal reserve in each cell defined by ``thresholds``.

    An empty cell copies the reserve of the nearest non-empty cell, measured
    between cell centres (left neighbour on an exact tie).
    """
    predictions = np.asarray(predictions, dtype=float)
    bids = np.asarray(bids, dtype=float)
    if bids.size == 0:
        raise ValidationError("empty dataset")
    shell = PiecewiseReserve(thresholds, [0.0] * (len(thresholds) + 1))
    cells = shell.cell_of(predictions)
    k = shell.k
    reserves = [None] * k
    for j in range(k):
        mask = cells == j
        if mask.any():
            reserves[j] = empirical_optimal_reserve(bids[mask])[0]
    filled = [j for j in range(k) if reserves[j] is not None]
    centres = _cell_centres(shell.thresholds)
    for j in range(k):
        if reserves[j] is None:
            near = min(filled, key=lambda i: (abs(centres[i] - centres[j]), i))
            reserves[j] = reserves[near]
    return PiecewiseReserve(shell.thresholds, reserves, predictor_id)


def _snap_to_edges(thresholds, quant: QuantizationConfig):
    """Move each cut to the bucket edge nearest to it.

    Cuts sit between occupied bucket midpoints, so some edge always lies
    strictly between the two. Raw predictions then land in the same cell as
    their quantised values, except a raw value lying exactly on that edge.
    """
    if not thresholds:
        return thresholds
    t = np.asarray(thresholds)
    pos = (t - quant.range_low) / quant.width
    return tuple(float(v) for v in quant.edge(np.round(pos)))


def ric_h_path(train: Dataset, predictor: Predictor, ks,
               quant: QuantizationConfig | None = None) -> dict[int, PiecewiseReserve]:
    """:func:`ric_h` for several ``k`` sharing one dynamic program."""
    ks = sorted({int(k) for k in ks})
    if len(train) == 0:
        raise ValidationError("empty dataset")
    if not ks or ks[0] < 1:
        raise ValidationError("k must be a positive integer")
    preds = predictor.predict(train.features)
    if quant is not None:
        preds = quantize(preds, quant)
    partitions = optimal_partitions(np.sort(preds), ks[-1])
    pid = predictor.id
    out = {}
    for k in ks:
        thresholds = partitions[k - 1].thresholds
        if quant is not None:
            thresholds = _snap_to_edges(thresholds, quant)
        out[k] = fit_cell_reserves(thresholds, preds, train.bids, pid)
    return out


def ric_h(train: Dataset, predictor: Predictor, k: int,
          quant: QuantizationConfig | None = None) -> PiecewiseReserve:
    """Reserve Inference from Clusters.

    Sort the (optionally quantised) training predictions, cut them into
    ``k`` cells minimising the summed within-cell spread, and set each
    cell's reserve to the empirical optimum over its bids. Empty cells are
    merged, so the result can have fewer than ``k`` cells.
    """
    return ric_h_path(train, predictor, [k], quant)[int(k)]


def offset_revenues(offsets, predictions, bids) -> np.ndarray:
    """Total revenue of ``max(h - t, 0)`` for every offset ``t`` (sort-based).

    Sample ``i`` pays ``h_i - t`` exactly when ``h_i - b_i <= t < h_i``.
    """
    t = np.asarray(offsets, dtype=float)
    h = np.asarray(predictions, dtype=float)
    gap = h - np.asarray(bids, dtype=float)
    order_g = np.argsort(gap)
    g_sorted = gap[order_g]
    h_by_gap = np.r_[0.0, np.cumsum(h[order_g])]
    h_sorted = np.sort(h)
    h_cum = np.r_[0.0, np.cumsum(h_sorted)]

    n_acc = np.searchsorted(g_sorted, t, side="right")
    n_free = np.searchsorted(h_sorted, t, side="right")
    # b >= 0 gives gap <= h, so {h <= t} is a subset of {gap <= t}.
    return (h_by_gap[n_acc] - n_acc * t) - (h_cum[n_free] - n_free * t)


def offset_candidates(predictions, bids) -> np.ndarray:
    h = np.asarray(predictions, dtype=float)
    b = np.asarray(bids, dtype=float)
    keep = h > b
    h, b = h[keep], b[keep]
    gap = h - b
    # h - (h - b) can round above b; step up until the price clears the bid.
    for _ in range(4):
        high = h - gap > b
        if not high.any():
            break
        gap[high] = np.nextafter(gap[high], np.inf)
    return np.unique(np.r_[0.0, gap])


def best_offset(predictions, bids, candidates=None) -> float:
    """Offset maximising revenue on ``(predictions, bids)``; smallest on ties.

    Candidates default to the gaps ``h_i - b_i`` (and 0): revenue jumps up
    at each gap and decreases linearly in between.
    """
    predictions = np.asarray(predictions, dtype=float)
    bids = np.asarray(bids, dtype=float)
    if bids.size == 0:
        raise ValidationError("empty dataset")
    if candidates is None:
        candidates = offset_candidates(predictions, bids)
    cand = np.unique(np.asarray(candidates, dtype=float))
    cand = cand[cand >= 0]
    if cand.size == 0:
        cand = np.zeros(1)
    fast = offset_revenues(cand, predictions, bids)
    # Re-score near-optimal candidates exactly to settle rounding.
    tol = 1e-9 * max(1.0, float(np.abs(fast).max()))
    short = cand[fast >= fast.max() - tol]
    exact = np.array([revenue(np.maximum(predictions - t, 0.0), bids).sum() for t in short])
    return float(short[int(np.argmax(exact))])


def offset_reserve_fit(train: Dataset, predictor: Predictor) -> OffsetReserve:
    if len(train) == 0:
        raise ValidationError("empty dataset")
    preds = predictor.predict(train.features)
    return OffsetReserve(best_offset(preds, train.bids), predictor.id)


def theoretical_offset(eta_sq: float) -> float:
    """``eta^(2/3)`` for a predictor with squared loss ``eta_sq``."""
    if eta_sq < 0:
        raise ValidationError("squared loss must be >= 0")
    return float(np.cbrt(eta_sq))


def monopoly_reserve(train: Dataset, predictor: Predictor | None = None) -> PiecewiseReserve:
    price, _ = empirical_optimal_reserve(train.bids)
    return PiecewiseReserve((), (price,), predictor.id if predictor is not None else "")
