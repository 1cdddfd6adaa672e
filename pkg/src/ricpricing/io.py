"""Text formats: dataset CSV, predictor and reserve files.

Dataset CSV has header ``f0,...,f{d-1},bid`` and one sample per line.
Floats are written with ``repr`` (shortest round-trip form), so a
write/read cycle is lossless.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import Dataset, PiecewiseReserve, ValidationError
from .regression import Predictor


def write_csv(dataset: Dataset, path) -> None:
    d = dataset.dimension
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join([f"f{j}" for j in range(d)] + ["bid"]) + "\n")
        for row, b in zip(dataset.features, dataset.bids):
            fh.write(",".join(repr(float(v)) for v in row) + f",{float(b)!r}\n")


def load_csv(path) -> Dataset:
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if "bid" not in header:
            raise ValidationError(f"{path}: missing column 'bid'")
        bid_col = header.index("bid")
        feat_cols = [i for i, h in enumerate(header) if i != bid_col]
        expected = [f"f{j}" for j in range(len(feat_cols))]
        if [header[i] for i in feat_cols] != expected:
            raise ValidationError(f"{path}: feature columns must be {','.join(expected)}")
        rows, bids = [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise ValidationError(
                    f"{path}: line {lineno}: expected {len(header)} fields, got {len(rec)}"
                )
            try:
                vals = [float(v) for v in rec]
            except ValueError:
                raise ValidationError(f"{path}: line {lineno}: non-numeric field") from None
            if not vals[bid_col] >= 0:
                raise ValidationError(f"{path}: line {lineno}: bid must be >= 0")
            rows.append([vals[i] for i in feat_cols])
            bids.append(vals[bid_col])
    if not bids:
        raise ValidationError(f"{path}: no samples")
    return Dataset(np.array(rows, dtype=float).reshape(len(bids), len(feat_cols)), np.array(bids))


def dumps_predictor(p: Predictor) -> str:
    lines = [p.kind, str(p.dimension)]
    if p.kind == "linear":
        lines += [repr(p.intercept)] + [repr(w) for w in p.weights]
    elif p.kind == "constant":
        lines.append(repr(p.intercept))
    else:
        lines += [f"{key},{value!r}" for key, value in sorted(p.table.items())]
    return "\n".join(lines) + "\n"


def loads_predictor(text: str) -> Predictor:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValidationError("predictor file needs kind and dimension lines")
    kind = lines[0]
    try:
        d = int(lines[1])
        if kind == "linear":
            vals = [float(v) for v in lines[2:]]
            if len(vals) != d + 1:
                raise ValidationError(f"linear predictor needs {d + 1} values, got {len(vals)}")
            return Predictor("linear", d, weights=vals[1:], intercept=vals[0])
        if kind == "constant":
            return Predictor.constant(float(lines[2]), d)
        if kind == "external-table":
            table = {}
            for ln in lines[2:]:
                key, value = ln.rsplit(",", 1)
                table[key] = float(value)
            return Predictor("external-table", d, table=table)
    except (ValueError, IndexError):
        raise ValidationError("malformed predictor file") from None
    raise ValidationError(f"unknown predictor kind {kind!r}")


def dumps_reserve(r: PiecewiseReserve) -> str:
    lines = []
    if r.predictor_id:
        lines.append(f"predictor {r.predictor_id}")
    lines += [f"threshold {t!r}" for t in r.thresholds]
    lines += [f"reserve {v!r}" for v in r.reserves]
    return "\n".join(lines) + "\n"


def loads_reserve(text: str) -> PiecewiseReserve:
    thresholds, reserves, pid = [], [], ""
    for lineno, ln in enumerate(text.splitlines(), start=1):
        parts = ln.split()
        if not parts:
            continue
        try:
            tag, value = parts
            if tag == "threshold":
                thresholds.append(float(value))
            elif tag == "reserve":
                reserves.append(float(value))
            elif tag == "predictor":
                pid = value
            else:
                raise ValueError
        except ValueError:
            raise ValidationError(f"reserve file line {lineno}: cannot parse {ln!r}") from None
    return PiecewiseReserve(thresholds, reserves, pid)


def save_text(text: str, path) -> None:
    Path(path).write_text(text, encoding="utf-8")


def load_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror}") from None
