"""Fuzz the variance/revenue inequalities on random empirical bid distributions.

Prints the tightest observed slack per inequality and exits non-zero on any
violation.

    python3 scripts/fuzz_bounds.py --trials 100000
"""
import argparse
import sys

import numpy as np

from ricpricing.bounds import check_all, summarize_empirical


def draw_bids(rng):
    m = int(rng.integers(2, 501))
    kind = rng.integers(3)
    if kind == 0:
        return rng.uniform(0, rng.uniform(0.1, 100), m)
    if kind == 1:
        return rng.lognormal(rng.normal(0, 2), rng.uniform(0.01, 3), m)
    lo, hi = np.sort(rng.uniform(0, 50, 2))
    pick = rng.uniform(size=m) < rng.uniform()
    return np.abs(np.where(pick, lo, hi) + rng.uniform(0, 2) * rng.normal(size=m))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    tightest = {}
    violations = 0
    for _ in range(args.trials):
        for c in check_all(summarize_empirical(draw_bids(rng))):
            # Relative slack, so different scales are comparable.
            rel = c.slack / max(1.0, abs(c.lhs), abs(c.rhs))
            if c.name not in tightest or rel < tightest[c.name]:
                tightest[c.name] = rel
            if not c.satisfied:
                violations += 1
                print("VIOLATION", c.line())
    for name, rel in tightest.items():
        print(f"{name:26s} min relative slack {rel:.3e}")
    print(f"{violations} violations in {args.trials} trials")
    return 1 if violations else 0


if __name__ == "__main__":
    sys.exit(main())
