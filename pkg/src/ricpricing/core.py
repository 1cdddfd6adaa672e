"""Domain types and empirical revenue accounting.

Everything here works on the empirical distribution of (features, bid)
pairs. Revenue is always reported per sample (divided by ``m``); a bid
``b`` is accepted at price ``p`` iff ``b >= p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .regression import Predictor


class ValidationError(ValueError):
    """Bad user input: empty data, shape mismatch, malformed files."""


@dataclass(frozen=True)
class Sample:
    features: np.ndarray
    bid: float


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (m x d) and bid vector (m,).

    Stored column-wise rather than as a list of ``Sample`` objects;
    indexing returns a ``Sample``.
    """

    features: np.ndarray
    bids: np.ndarray

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        bids = np.asarray(self.bids, dtype=float).reshape(-1)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        if features.ndim != 2:
            raise ValidationError("features must be a 2-d array")
        if features.shape[0] != bids.shape[0]:
            raise ValidationError(
                f"{features.shape[0]} feature rows but {bids.shape[0]} bids"
            )
        if np.any(bids < 0) or np.any(~np.isfinite(bids)):
            raise ValidationError("bids must be finite and non-negative")
        features.setflags(write=False)
        bids.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "bids", bids)

    @classmethod
    def from_samples(cls, samples) -> Dataset:
        samples = list(samples)
        if not samples:
            raise ValidationError("empty dataset")
        dims = {np.size(s.features) for s in samples}
        if len(dims) != 1:
            raise ValidationError(f"inconsistent feature dimensions {sorted(dims)}")
        return cls(np.vstack([np.ravel(s.features) for s in samples]),
                   np.array([s.bid for s in samples]))

    @property
    def dimension(self) -> int:
        return self.features.shape[1]

    def __len__(self) -> int:
        return self.bids.shape[0]

    def __getitem__(self, i: int) -> Sample:
        return Sample(self.features[i], float(self.bids[i]))

    def subset(self, idx) -> Dataset:
        return Dataset(self.features[idx], self.bids[idx])


@dataclass(frozen=True)
class EmpiricalStats:
    mean_bid: float
    variance: float
    count: int


@dataclass(frozen=True)
class PiecewiseReserve:
    """Reserve constant on each level set of a predictor.

    Cell ``j`` holds predictions in ``(t[j-1], t[j]]`` with ``t[-1] = -inf``
    and ``t[k-1] = +inf``, so there is always one more reserve than there
    are thresholds.
    """

    thresholds: tuple[float, ...]
    reserves: tuple[float, ...]
    predictor_id: str = ""

    def __post_init__(self):
        t = tuple(float(v) for v in self.thresholds)
        r = tuple(float(v) for v in self.reserves)
        if len(r) != len(t) + 1:
            raise ValidationError(
                f"{len(t)} thresholds need {len(t) + 1} reserves, got {len(r)}"
            )
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValidationError("thresholds must be strictly increasing")
        if any(not np.isfinite(v) for v in t):
            raise ValidationError("thresholds must be finite")
        if any(not (v >= 0) for v in r):
            raise ValidationError("reserves must be non-negative")
        object.__setattr__(self, "thresholds", t)
        object.__setattr__(self, "reserves", r)

    @property
    def k(self) -> int:
        return len(self.reserves)

    def cell_of(self, predictions) -> np.ndarray:
        # side="left" counts thresholds strictly below v, i.e. (t_{j-1}, t_j].
        return np.searchsorted(np.asarray(self.thresholds), np.asarray(predictions, dtype=float),
                               side="left")

    def prices(self, predictions) -> np.ndarray:
        return np.asarray(self.reserves)[self.cell_of(predictions)]


@dataclass(frozen=True)
class CellReport:
    count: int
    mean_bid: float
    reserve: float
    revenue: float
    std: float


@dataclass(frozen=True)
class RevenueReport:
    mean_bid: float
    mean_revenue: float
    separation: float
    per_cell: tuple[CellReport, ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return sum(c.count for c in self.per_cell)


def revenue(prices, bids) -> np.ndarray:
    """Per-sample posted-price revenue ``p * 1[b >= p]``."""
    prices = np.asarray(prices, dtype=float)
    bids = np.asarray(bids, dtype=float)
    return np.where(bids >= prices, prices, 0.0)


def empirical_stats(dataset: Dataset) -> EmpiricalStats:
    """Mean and population variance of the bids."""
    bids = dataset.bids if isinstance(dataset, Dataset) else np.asarray(dataset, dtype=float)
    if bids.size == 0:
        raise ValidationError("empty dataset")
    mean = float(np.mean(bids))
    return EmpiricalStats(mean, float(np.mean((bids - mean) ** 2)), int(bids.size))


def evaluate_prices(reserve: PiecewiseReserve, predictions, bids) -> RevenueReport:
    """Revenue report for a piecewise reserve given precomputed predictions."""
    predictions = np.asarray(predictions, dtype=float)
    bids = np.asarray(bids, dtype=float)
    if bids.size == 0:
        raise ValidationError("empty dataset")
    if predictions.shape != bids.shape:
        raise ValidationError("one prediction per bid required")
    cells = reserve.cell_of(predictions)
    prices = np.asarray(reserve.reserves)[cells]
    rev = revenue(prices, bids)

    per_cell = []
    for j, r in enumerate(reserve.reserves):
        mask = cells == j
        mj = int(mask.sum())
        if mj == 0:
            per_cell.append(CellReport(0, 0.0, r, 0.0, 0.0))
            continue
        bj = bids[mask]
        mu = float(bj.mean())
        per_cell.append(CellReport(mj, mu, r, float(rev[mask].mean()),
                                   float(np.sqrt(np.mean((bj - mu) ** 2)))))

    mean_bid = float(bids.mean())
    mean_rev = float(rev.mean())
    return RevenueReport(mean_bid, mean_rev, mean_bid - mean_rev, tuple(per_cell))


def evaluate_reserve(reserve: PiecewiseReserve, predictor: Predictor,
                     dataset: Dataset) -> RevenueReport:
    if len(dataset) == 0:
        raise ValidationError("empty dataset")
    return evaluate_prices(reserve, predictor.predict(dataset.features), dataset.bids)
