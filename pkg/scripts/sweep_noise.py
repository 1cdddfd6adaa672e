"""Revenue of RIC-h, offset and monopoly pricing across noise levels.

Writes one CSV per scenario with mean and std test revenue per sigma and
method, ready for plotting as error bars.

    python3 scripts/sweep_noise.py --out-dir results --replicas 20
"""
import argparse
import time
from pathlib import Path

from ricpricing.datagen import SCENARIOS, SIGMAS
from ricpricing.harness import ExperimentConfig, sweep_sigma, write_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="results")
    p.add_argument("--scenarios", nargs="+", choices=SCENARIOS, default=list(SCENARIOS))
    p.add_argument("--sigmas", nargs="+", type=float, default=list(SIGMAS))
    p.add_argument("--n", type=int, default=4000, help="samples per split (16000 for full size)")
    p.add_argument("--replicas", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for scenario in args.scenarios:
        start = time.perf_counter()
        cfg = ExperimentConfig(scenario=scenario, n=args.n, replicas=args.replicas,
                               seed=args.seed)
        rows = sweep_sigma(cfg, args.sigmas)
        path = out / f"sweep_{scenario}.csv"
        write_sweep(rows, path)
        print(f"{scenario}: {path} ({time.perf_counter() - start:.1f}s)")
        for row in rows:
            print(f"  sigma={row['sigma']:<5} {row['method']:<9} "
                  f"{row['mean']:8.4f} +- {row['std']:.4f}")


if __name__ == "__main__":
    main()
