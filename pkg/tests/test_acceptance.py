"""Acceptance criteria, one test each; every test logs a PASS/FAIL line."""
import math
import time

import numpy as np

from helpers import grid_best_revenue
from ricpricing import (DEFAULT_QUANTIZATION, brute_force_partition,
                        empirical_optimal_reserve, evaluate_reserve, fit_linear_least_squares,
                        optimal_k_partition, quantize, ric_h, squared_loss, theoretical_offset)
from ricpricing.bounds import (check_all, check_cluster_bound, corollary_constant,
                               check_separation_bound, equal_revenue_summary, offset_lemma_rhs,
                               summarize_empirical)
from ricpricing.cli import main
from ricpricing.core import revenue
from ricpricing.datagen import ScenarioConfig, generate
from ricpricing.harness import ExperimentConfig, run_experiment


def test_dp_matches_brute_force(record):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        y = np.sort(rng.uniform(0, 1, rng.integers(1, 13)))
        k = int(rng.integers(1, 5))
        dp = optimal_k_partition(y, k).objective
        bf = brute_force_partition(y, k).objective
        worst = max(worst, abs(dp - bf) / max(abs(bf), 1e-300) if bf else abs(dp))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 30
    record("1 dp_vs_brute_force", ok, f"max_rel_err={worst:.2e} time={elapsed:.1f}s")
    assert ok


def test_reserve_argmax(record):
    # Exact up to rounding of mean vs count / m, hence the 1e-12 relative slack.
    rng = np.random.default_rng(2)
    failures = 0
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(1, 51))
        bids = rng.choice([rng.uniform(0, 1, m), rng.lognormal(0, 1, m),
                           np.round(rng.uniform(0, 5, m), 1)])
        price, rev = empirical_optimal_reserve(bids)
        at_candidate = price in bids and math.isclose(rev, price * np.mean(bids >= price),
                                                      rel_tol=1e-12)
        grid = grid_best_revenue(bids)
        worst = max(worst, (grid - rev) / grid)
        if not (at_candidate and rev >= grid * (1 - 1e-12)):
            failures += 1
    record("2 reserve_argmax", failures == 0,
           f"failures={failures}/1000 max grid excess={worst:.1e}")
    assert failures == 0


def _fuzz_bids(rng):
    m = int(rng.integers(2, 501))
    kind = rng.integers(3)
    if kind == 0:
        return rng.uniform(0, rng.uniform(0.1, 100), m)
    if kind == 1:
        return rng.lognormal(rng.normal(0, 2), rng.uniform(0.01, 3), m)
    lo, hi = np.sort(rng.uniform(0, 50, 2))
    w = rng.uniform(0, 1)
    pick = rng.uniform(size=m) < w
    spread = rng.uniform(0, 2)
    return np.abs(np.where(pick, lo, hi) + spread * rng.normal(size=m))


def test_bound_inequalities(record):
    rng = np.random.default_rng(3)
    violations = []
    for _ in range(10_000):
        for c in check_all(summarize_empirical(_fuzz_bids(rng))):
            if not c.satisfied:
                violations.append(c.line())
    record("3 bound_inequalities", not violations, f"violations={len(violations)}/10000")
    assert not violations, violations[:3]


def test_tightness(record):
    Ms = (1.2, 1.1, 1.05)
    ratios, slacks = [], []
    for M in Ms:
        d = equal_revenue_summary(M)
        ratios.append(d.variance / (math.log(M) ** 3 / 3))
        s = check_separation_bound(d)[1]
        slacks.append(s.slack / s.rhs)
    close = all(abs(r - 1) <= 0.15 for r in ratios)
    decreasing = all(b < a for a, b in zip(slacks, slacks[1:]))
    record("4 tightness", close and decreasing,
           "var/(ln^3 M/3)=" + ",".join(f"{r:.4f}" for r in ratios)
           + " rel_slack=" + ",".join(f"{s:.4f}" for s in slacks))
    assert close and decreasing


def test_cluster_bound(record):
    rng = np.random.default_rng(5)
    violations = 0
    for i in range(100):
        cfg = ScenarioConfig(n=int(rng.integers(20, 400)), d=int(rng.integers(1, 11)),
                             noise_sigma=float(rng.choice([0.01, 0.1, 1.0, 2.0, 4.0])),
                             scenario=str(rng.choice(["linear", "bimodal"])), seed=i)
        train = generate(cfg)
        h = fit_linear_least_squares(train)
        k = int(rng.integers(1, 25))
        quant = DEFAULT_QUANTIZATION if rng.uniform() < 0.5 else None
        rep = evaluate_reserve(ric_h(train, h, k, quant), h, train)
        violations += not check_cluster_bound(rep).satisfied
    record("5 cluster_bound", violations == 0, f"violations={violations}/100")
    assert violations == 0


def test_offset_lemma(record):
    worst = -math.inf
    failures = 0
    for seed in range(20):
        base = ScenarioConfig(n=4000, noise_sigma=0.1, seed=seed)
        train, test = generate(base.derive(1)), generate(base.derive(2))
        h = fit_linear_least_squares(train)
        eta_sq = squared_loss(h, test).squared_loss
        prices = np.maximum(h.predict(test.features) - theoretical_offset(eta_sq), 0)
        gap = test.bids - revenue(prices, test.bids)
        se = gap.std(ddof=1) / math.sqrt(gap.size)
        margin = offset_lemma_rhs(eta_sq) + 3 * se - gap.mean()
        worst = max(worst, gap.mean() / offset_lemma_rhs(eta_sq))
        failures += margin < 0
    record("6 offset_lemma", failures == 0,
           f"failures={failures}/20 max S/bound={worst:.3f}")
    assert failures == 0


def _regime(scenario, sigma):
    cfg = ExperimentConfig(scenario=scenario, sigma=sigma, n=4000, replicas=20, seed=0)
    rep = run_experiment(cfg)
    return rep.raw("ric_h"), rep.raw("offset")


def test_regimes(record):
    ric, off = _regime("bimodal", 0.01)
    wins_a = int(np.sum(ric > off))
    record("7a bimodal_low_noise", wins_a >= 18,
           f"ric_h>offset in {wins_a}/20 (means {ric.mean():.3f} vs {off.mean():.3f})")
    ric, off = _regime("linear", 0.01)
    wins_b = int(np.sum(off >= ric))
    record("7b linear_low_noise", wins_b >= 18,
           f"offset>=ric_h in {wins_b}/20 (means {off.mean():.3f} vs {ric.mean():.3f})")
    ric, off = _regime("linear", 4.0)
    gap = float(np.mean(np.abs(ric - off) / off))
    record("7c linear_high_noise", gap <= 0.1, f"mean rel gap={gap:.4f}")
    assert wins_a >= 18 and wins_b >= 18 and gap <= 0.1


def test_determinism(record, tmp_path):
    argv = ["experiment", "--scenario", "bimodal", "--sigma", "1.0", "--n", "1000",
            "--replicas", "3", "--seed", "7"]
    assert main(argv + ["--out", str(tmp_path / "a.csv")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b.csv")]) == 0
    same = (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    record("8 determinism", same, "byte-identical reports" if same else "reports differ")
    assert same


def test_corollary_constant(record):
    c = corollary_constant()
    ok = abs(c - 2.28) <= 1e-2
    record("9 corollary_constant", ok, f"12^(1/3)={c:.5f}")
    assert ok


def test_dp_speed(record):
    train = generate(ScenarioConfig(n=1000, noise_sigma=1.0, seed=10))
    h = fit_linear_least_squares(train)
    realistic = np.sort(quantize(h.predict(train.features), DEFAULT_QUANTIZATION))
    # Worst case: every one of the 1000 buckets occupied once.
    distinct = quantize(np.linspace(0, 50, 1000, endpoint=False), DEFAULT_QUANTIZATION)
    times = []
    for y in (realistic, distinct):
        start = time.perf_counter()
        optimal_k_partition(y, 24)
        times.append(time.perf_counter() - start)
    ok = max(times) < 1.0
    record("10 dp_speed", ok, f"n=1000 k=24 time={times[0]:.3f}s "
           f"(all distinct: {times[1]:.3f}s)")
    assert ok
