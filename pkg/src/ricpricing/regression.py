"""Bid predictors and their squared loss."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .core import Dataset, ValidationError

KINDS = ("linear", "constant", "external-table")


def feature_key(row) -> str:
    """Lookup key for one feature row in an external-table predictor."""
    return ",".join(repr(float(v)) for v in np.ravel(row))


@dataclass(frozen=True)
class Predictor:
    """Map from features to a predicted bid.

    ``linear`` predicts ``weights @ x + intercept``; ``constant`` predicts
    ``intercept``; ``external-table`` replays predictions produced elsewhere,
    keyed by :func:`feature_key`.
    """

    kind: str
    dimension: int
    weights: tuple[float, ...] = ()
    intercept: float = 0.0
    table: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown predictor kind {self.kind!r}")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.kind == "linear" and len(self.weights) != self.dimension:
            raise ValidationError(
                f"linear predictor needs {self.dimension} weights, got {len(self.weights)}"
            )

    @classmethod
    def constant(cls, value: float, dimension: int) -> Predictor:
        return cls("constant", dimension, intercept=float(value))

    @classmethod
    def from_table(cls, features, predictions) -> Predictor:
        features = np.atleast_2d(np.asarray(features, dtype=float))
        table = {feature_key(row): float(p) for row, p in zip(features, predictions)}
        return cls("external-table", features.shape[1], table=table)

    def predict(self, features) -> np.ndarray:
        X = np.asarray(features, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1) if self.dimension == 1 else X.reshape(1, -1)
        if X.shape[1] != self.dimension:
            raise ValidationError(
                f"predictor expects dimension {self.dimension}, data has {X.shape[1]}"
            )
        if self.kind == "linear":
            return X @ np.asarray(self.weights) + self.intercept
        if self.kind == "constant":
            return np.full(X.shape[0], self.intercept)
        try:
            return np.array([self.table[feature_key(row)] for row in X])
        except KeyError as e:
            raise ValidationError(f"no table entry for features {e.args[0]}") from None

    @property
    def id(self) -> str:
        from .io import dumps_predictor
        return hashlib.sha1(dumps_predictor(self).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class LossReport:
    squared_loss: float
    rmse: float


def fit_linear_least_squares(train: Dataset, ridge: float = 1e-8) -> Predictor:
    """Ridge regression via the normal equations.

    The penalty ``ridge * ||w||^2`` excludes the intercept. Solved with a
    Cholesky factorisation of the (d+1) x (d+1) Gram matrix.
    """
    if ridge < 0:
        raise ValidationError("ridge must be >= 0")
    if len(train) == 0:
        raise ValidationError("empty dataset")
    X = train.features
    m, d = X.shape
    A = np.hstack([np.ones((m, 1)), X])
    gram = A.T @ A
    gram[np.diag_indices(d + 1)] += np.r_[0.0, np.full(d, ridge)]
    rhs = A.T @ train.bids
    try:
        if ridge == 0 and np.linalg.matrix_rank(gram) < d + 1:
            raise linalg.LinAlgError("rank deficient")
        coef = linalg.cho_solve(linalg.cho_factor(gram), rhs)
    except linalg.LinAlgError:
        raise ValidationError(
            "normal equations are singular; use ridge > 0"
        ) from None
    return Predictor("linear", d, weights=coef[1:], intercept=float(coef[0]))


def squared_loss(predictor: Predictor, dataset: Dataset) -> LossReport:
    if len(dataset) == 0:
        raise ValidationError("empty dataset")
    resid = predictor.predict(dataset.features) - dataset.bids
    loss = float(np.mean(resid**2))
    return LossReport(loss, float(np.sqrt(loss)))
