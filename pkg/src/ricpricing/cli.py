"""Command line interface.

Exit codes: 0 success, 2 invalid input, 1 anything else.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bounds
from .core import ValidationError, evaluate_reserve
from .datagen import SCENARIOS, ScenarioConfig, generate
from .harness import DEFAULT_K_GRID, ExperimentConfig, run_experiment, select_k, write_report
from .io import (dumps_predictor, dumps_reserve, load_csv, load_text, loads_predictor,
                 loads_reserve, save_text, write_csv)
from .pricing import DEFAULT_QUANTIZATION, ric_h_path
from .regression import fit_linear_least_squares


def _k_grid(text: str) -> tuple[int, ...]:
    try:
        ks = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k grid {text!r}") from None
    if not ks or min(ks) < 1:
        raise argparse.ArgumentTypeError("k values must be positive integers")
    return ks


def cmd_generate(args) -> None:
    cfg = ScenarioConfig(args.n, args.d, args.sigma, args.scenario, args.seed)
    write_csv(generate(cfg), args.out)


def cmd_fit(args) -> None:
    train = load_csv(args.data)
    h = fit_linear_least_squares(train, args.ridge)
    quant = DEFAULT_QUANTIZATION if args.quantize else None
    reserves = ric_h_path(train, h, args.k_grid, quant)
    if args.holdout:
        holdout = load_csv(args.holdout)
        k = select_k({k: evaluate_reserve(r, h, holdout).mean_revenue
                      for k, r in reserves.items()})
    else:
        k = max(args.k_grid)
    save_text(dumps_predictor(h), args.predictor_out)
    save_text(dumps_reserve(reserves[k]), args.reserve_out)
    print(f"k {k} cells {reserves[k].k}")


def _load_model(args):
    return loads_predictor(load_text(args.predictor)), loads_reserve(load_text(args.reserve))


def cmd_price(args) -> None:
    h, reserve = _load_model(args)
    data = load_csv(args.data)
    preds = h.predict(data.features)
    prices = reserve.prices(preds)
    rows = zip(preds.tolist(), prices.tolist())
    lines = ["prediction,reserve"] + [f"{p!r},{r!r}" for p, r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        save_text(text, args.out)
    else:
        sys.stdout.write(text)


def cmd_evaluate(args) -> None:
    h, reserve = _load_model(args)
    rep = evaluate_reserve(reserve, h, load_csv(args.data))
    print(f"mean_bid {rep.mean_bid!r}")
    print(f"mean_revenue {rep.mean_revenue!r}")
    print(f"separation {rep.separation!r}")
    for j, c in enumerate(rep.per_cell):
        print(f"cell {j} count {c.count} mean_bid {c.mean_bid!r} reserve {c.reserve!r} "
              f"revenue {c.revenue!r} std {c.std!r}")


def cmd_experiment(args) -> None:
    cfg = ExperimentConfig(scenario=args.scenario, sigma=args.sigma, data=args.data, n=args.n,
                           d=args.d, replicas=args.replicas, k_grid=args.k_grid,
                           quantize=args.quantize, seed=args.seed)
    report = run_experiment(cfg)
    if args.out:
        write_report(report, args.out)
    for m, agg in report.aggregate().items():
        print(f"{m} mean {agg['mean']:.6g} std {agg['std']:.6g} "
              f"normalized {agg['normalized_mean']:.6g}")


def cmd_bounds_check(args) -> None:
    if args.equal_revenue is not None:
        summary = bounds.equal_revenue_summary(args.equal_revenue)
    elif args.bids:
        text = load_text(args.bids)
        try:
            bids = np.array([float(v) for v in text.split()])
        except ValueError:
            raise ValidationError(f"{args.bids}: non-numeric bid") from None
        if np.any(bids < 0):
            raise ValidationError(f"{args.bids}: bids must be >= 0")
        summary = bounds.summarize_empirical(bids)
    else:
        raise ValidationError("give a bid file or --equal-revenue M")
    for check in bounds.check_all(summary):
        print(check.line())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ricpricing", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset CSV")
    g.add_argument("--scenario", choices=SCENARIOS, default="linear")
    g.add_argument("--n", type=int, default=4000)
    g.add_argument("--d", type=int, default=10)
    g.add_argument("--sigma", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    f = sub.add_parser("fit", help="fit a linear predictor and RIC-h reserve")
    f.add_argument("--data", required=True, help="training CSV")
    f.add_argument("--holdout", help="CSV used to choose k from the grid")
    f.add_argument("--k-grid", type=_k_grid, default=(8,))
    f.add_argument("--quantize", action=argparse.BooleanOptionalAction, default=False)
    f.add_argument("--ridge", type=float, default=1e-8)
    f.add_argument("--predictor-out", required=True)
    f.add_argument("--reserve-out", required=True)
    f.set_defaults(func=cmd_fit)

    for name, func, hlp in (("price", cmd_price, "reserve price for every row of a CSV"),
                            ("evaluate", cmd_evaluate, "revenue report of a reserve on a CSV")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--predictor", required=True)
        s.add_argument("--reserve", required=True)
        s.add_argument("--data", required=True)
        if name == "price":
            s.add_argument("--out")
        s.set_defaults(func=func)

    e = sub.add_parser("experiment", help="replicated RIC-h / offset / monopoly comparison")
    e.add_argument("--scenario", choices=SCENARIOS, default="linear")
    e.add_argument("--data", help="CSV of real logs instead of a synthetic scenario")
    e.add_argument("--sigma", type=float, default=0.1)
    e.add_argument("--n", type=int, default=4000, help="samples per split")
    e.add_argument("--d", type=int, default=10)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--replicas", type=int, default=20)
    e.add_argument("--k-grid", type=_k_grid, default=DEFAULT_K_GRID)
    e.add_argument("--quantize", action=argparse.BooleanOptionalAction, default=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)

    b = sub.add_parser("bounds-check", help="evaluate the variance/revenue inequalities")
    b.add_argument("bids", nargs="?", help="file with one bid per line")
    b.add_argument("--equal-revenue", type=float, metavar="M")
    b.set_defaults(func=cmd_bounds_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {e!r}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
