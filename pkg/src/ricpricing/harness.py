"""Train / holdout / test experiment driver.

Per replica: fit a linear bid predictor on the training split, build
RIC-h reserves for every ``k`` in the grid and keep the ``k`` with the best
holdout revenue, tune the offset rule on the holdout split, and report
test revenue of RIC-h, offset and the single monopoly price. Revenues are
normalised by the monopoly revenue of the same replica.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Dataset, ValidationError, evaluate_prices, revenue
from .datagen import ScenarioConfig, Stream, generate, mix
from .io import load_csv
from .pricing import (DEFAULT_QUANTIZATION, OffsetReserve, best_offset, offset_candidates,
                      ric_h_path)
from .regression import fit_linear_least_squares

METHODS = ("ric_h", "offset", "monopoly")
ANCHOR = "monopoly"
DEFAULT_K_GRID = tuple(range(2, 25, 2))

STREAM_REPLICA = 100
STREAM_TRAIN, STREAM_HOLDOUT, STREAM_TEST, STREAM_SHUFFLE = 101, 102, 103, 104


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str = "linear"
    sigma: float = 0.1
    data: str | None = None  # CSV path; overrides the synthetic scenario
    n: int = 4000
    d: int = 10
    replicas: int = 20
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    quantize: bool = True
    seed: int = 0
    ridge: float = 1e-8
    train_size: int = 20000

    def __post_init__(self):
        if self.replicas < 1:
            raise ValidationError("replicas must be >= 1")
        if not self.k_grid or min(self.k_grid) < 1:
            raise ValidationError("k_grid must be non-empty with k >= 1")
        object.__setattr__(self, "k_grid", tuple(sorted({int(k) for k in self.k_grid})))


@dataclass(frozen=True)
class ReplicaResult:
    replica: int
    revenues: dict[str, float]
    chosen_k: int
    offset: float
    holdout_revenues: dict[int, float] = field(default_factory=dict)

    def normalized(self, method: str) -> float:
        anchor = self.revenues[ANCHOR]
        return self.revenues[method] / anchor if anchor > 0 else float("nan")


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    replicas: tuple[ReplicaResult, ...]
    anchor: str = ANCHOR

    def raw(self, method: str) -> np.ndarray:
        return np.array([r.revenues[method] for r in self.replicas])

    def normalized(self, method: str) -> np.ndarray:
        return np.array([r.normalized(method) for r in self.replicas])

    def aggregate(self) -> dict[str, dict[str, float]]:
        out = {}
        for m in METHODS:
            raw, norm = self.raw(m), self.normalized(m)
            ddof = 1 if raw.size > 1 else 0
            out[m] = {"mean": float(raw.mean()), "std": float(raw.std(ddof=ddof)),
                      "normalized_mean": float(norm.mean()),
                      "normalized_std": float(norm.std(ddof=ddof))}
        return out


def select_k(holdout_revenues: dict[int, float]) -> int:
    """Best holdout revenue; smallest ``k`` on ties."""
    if not holdout_revenues:
        raise ValidationError("no holdout revenues")
    return min(holdout_revenues, key=lambda k: (-holdout_revenues[k], k))


def replica_seed(seed: int, replica: int) -> int:
    return mix(seed + replica, STREAM_REPLICA)


def make_splits(config: ExperimentConfig, replica: int,
                source: Dataset | None = None) -> tuple[Dataset, Dataset, Dataset]:
    rseed = replica_seed(config.seed, replica)
    if source is None:
        base = ScenarioConfig(config.n, config.d, config.sigma, config.scenario, rseed)
        return tuple(generate(base.derive(s)) for s in (STREAM_TRAIN, STREAM_HOLDOUT, STREAM_TEST))
    m = len(source)
    n_train = min(config.train_size, m // 3)
    n_eval = min(n_train, (m - n_train) // 2)
    if n_train < 1 or n_eval < 1:
        raise ValidationError(f"need at least 3 samples to split, got {m}")
    perm = np.argsort(Stream(rseed, STREAM_SHUFFLE).uniform(m), kind="stable")
    a, b = n_train, n_train + n_eval
    return source.subset(perm[:a]), source.subset(perm[a:b]), source.subset(perm[b:b + n_eval])


def run_replica(config: ExperimentConfig, replica: int,
                source: Dataset | None = None) -> ReplicaResult:
    train, holdout, test = make_splits(config, replica, source)
    h = fit_linear_least_squares(train, config.ridge)
    quant = DEFAULT_QUANTIZATION if config.quantize else None
    reserves = ric_h_path(train, h, (1, *config.k_grid), quant)

    hold_pred = h.predict(holdout.features)
    test_pred = h.predict(test.features)
    holdout_rev = {k: evaluate_prices(reserves[k], hold_pred, holdout.bids).mean_revenue
                   for k in config.k_grid}
    k_best = select_k(holdout_rev)

    # Offset candidates come from training gaps; the holdout picks among them.
    cands = offset_candidates(h.predict(train.features), train.bids)
    offset = OffsetReserve(best_offset(hold_pred, holdout.bids, cands), h.id)

    revenues = {
        "ric_h": evaluate_prices(reserves[k_best], test_pred, test.bids).mean_revenue,
        "offset": float(revenue(offset.prices(test_pred), test.bids).mean()),
        "monopoly": evaluate_prices(reserves[1], test_pred, test.bids).mean_revenue,
    }
    return ReplicaResult(replica, revenues, k_best, offset.offset, holdout_rev)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    source = load_csv(config.data) if config.data else None
    results = tuple(run_replica(config, r, source) for r in range(config.replicas))
    return ExperimentReport(config, results)


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["replica", "method", "k", "revenue_raw", "revenue_normalized"])
    for r in report.replicas:
        for m in METHODS:
            k = {"ric_h": r.chosen_k, "monopoly": 1}.get(m, "")
            w.writerow([r.replica, m, k, repr(r.revenues[m]), repr(r.normalized(m))])
    return buf.getvalue()


def write_report(report: ExperimentReport, path) -> None:
    try:
        Path(path).write_text(report_csv(report), encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror}") from None


def sweep_sigma(config: ExperimentConfig, sigmas) -> list[dict]:
    """Mean and std of test revenue per noise level and method (plot data)."""
    rows = []
    for s in sigmas:
        cfg = ExperimentConfig(**{**config.__dict__, "sigma": float(s)})
        agg = run_experiment(cfg).aggregate()
        for m in METHODS:
            rows.append({"scenario": cfg.scenario, "sigma": float(s), "method": m, **agg[m]})
    return rows


def write_sweep(rows: list[dict], path) -> None:
    fields = ["scenario", "sigma", "method", "mean", "std", "normalized_mean", "normalized_std"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
