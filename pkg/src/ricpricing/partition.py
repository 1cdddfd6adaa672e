"""Optimal k-segmentation of sorted values under the pairwise-spread cost.

A segment ``y[l:r]`` costs ``sqrt(sum_{i,i'} (y_i - y_i')^2)``, which equals
``sqrt(2 n sum y^2 - 2 (sum y)^2) = sqrt(2) * n * std``. The dynamic program
minimises the sum of segment costs over all ways of cutting the sorted array
into exactly ``k`` (possibly empty) contiguous segments in ``O(k u^2)`` time,
where ``u`` is the number of distinct values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import ValidationError

BRUTE_FORCE_MAX_N = 15
# Upper bound on cost-matrix entries held at once by the dynamic program.
_BLOCK_ENTRIES = 1 << 22


class SegmentCostTable:
    """Prefix sums of a sorted array for O(1) segment costs.

    Values are centred on their mean and accumulated in extended precision
    to limit cancellation in ``n * sum(y^2) - sum(y)^2``; near-constant
    segments still carry an absolute error of order ``sqrt(eps) * scale``.
    """

    def __init__(self, values):
        y = np.asarray(values, dtype=float).reshape(-1)
        if y.size and np.any(np.isnan(y)):
            raise ValidationError("values contain NaN")
        if np.any(np.diff(y) < 0):
            raise ValidationError("values must be sorted ascending")
        self.values = y
        self.count = y.size
        shift = float(y.mean()) if y.size else 0.0
        z = y.astype(np.longdouble) - shift
        zero = np.zeros(1, dtype=np.longdouble)
        self.prefix_sum = np.concatenate([zero, np.cumsum(z)])
        self.prefix_sum_sq = np.concatenate([zero, np.cumsum(z * z)])

    def costs(self, l, r) -> np.ndarray:
        """Vectorised :func:`segment_cost`; ``l`` and ``r`` broadcast."""
        l = np.asarray(l)
        r = np.asarray(r)
        n = r - l
        s1 = self.prefix_sum[r] - self.prefix_sum[l]
        s2 = self.prefix_sum_sq[r] - self.prefix_sum_sq[l]
        rad = (2.0 * (n * s2 - s1 * s1)).astype(float)
        out = np.sqrt(np.maximum(rad, 0.0))
        # Constant segments (incl. length 0 and 1) are exactly zero.
        y = self.values
        if y.size:
            lo = y[np.minimum(l, self.count - 1)]
            hi = y[np.maximum(r - 1, 0)]
            out = np.where((n <= 1) | (lo == hi), 0.0, out)
        return out


def segment_cost(table: SegmentCostTable, l: int, r: int) -> float:
    """Cost of the segment holding sorted values ``y[l:r]``."""
    if not 0 <= l <= r <= table.count:
        raise ValidationError(f"invalid segment [{l}, {r}) for n={table.count}")
    return float(table.costs(l, r))


@dataclass(frozen=True)
class PartitionResult:
    """Cuts ``0 = i_0 <= ... <= i_k = n`` over the sorted values.

    ``thresholds`` has one entry per non-empty interior cut, at the
    midpoint of the two values it separates; empty segments are merged
    away, so ``len(thresholds) + 1`` may be smaller than ``k``.
    """

    cut_indices: tuple[int, ...]
    thresholds: tuple[float, ...]
    objective: float

    @property
    def k(self) -> int:
        return len(self.cut_indices) - 1


def _result(table: SegmentCostTable, cuts) -> PartitionResult:
    cuts = tuple(int(c) for c in cuts)
    objective = 0.0
    for a, b in zip(cuts, cuts[1:]):
        objective += float(table.costs(a, b))
    y = table.values
    interior = sorted({c for c in cuts if 0 < c < table.count})
    thresholds = []
    for c in interior:
        t = 0.5 * (y[c - 1] + y[c])
        if not thresholds or t > thresholds[-1]:
            thresholds.append(float(t))
    return PartitionResult(cuts, tuple(thresholds), objective)


def _check(values, k):
    table = SegmentCostTable(values)
    if table.count < 1:
        raise ValidationError("need at least one value")
    if int(k) != k or k < 1:
        raise ValidationError("k must be a positive integer")
    return table


def optimal_partitions(values, k_max: int) -> list[PartitionResult]:
    """Optimal partitions for every ``k`` in ``1..k_max`` from one DP run.

    Cuts are only placed between strictly increasing neighbours; splitting
    a run of equal values never lowers the cost (the cost is concave in
    how many copies go to each side), so this loses nothing.
    """
    table = _check(values, k_max)
    y = table.values
    n = table.count
    # Candidate cut positions: 0, every strict increase, n.
    pos = np.r_[0, np.flatnonzero(np.diff(y) > 0) + 1, n]
    u = pos.size

    # Layer l at column b only reads layer l-1 at rows a <= b, so columns can
    # be processed in blocks left to right with every layer inside a block;
    # each cost entry is computed once.
    A = np.full((k_max + 1, u), np.inf)
    A[0, 0] = 0.0
    choices = np.zeros((k_max, u), dtype=np.int64)
    block = max(1, _BLOCK_ENTRIES // u)
    for b0 in range(0, u, block):
        b1 = min(u, b0 + block)
        pa = pos[:b1, None]
        pb = pos[None, b0:b1]
        c = table.costs(pa, np.maximum(pa, pb))
        c[pa > pb] = np.inf
        cols = np.arange(b1 - b0)
        for layer in range(1, k_max + 1):
            total = A[layer - 1, :b1, None] + c
            arg = np.argmin(total, axis=0)
            choices[layer - 1, b0:b1] = arg
            A[layer, b0:b1] = total[arg, cols]

    results = []
    for k in range(1, k_max + 1):
        idx = [u - 1]
        for layer in range(k - 1, -1, -1):
            idx.append(choices[layer][idx[-1]])
        cuts = pos[np.array(idx[::-1])]
        results.append(_result(table, cuts))
    return results


def optimal_k_partition(values, k: int) -> PartitionResult:
    """Minimum total segment cost with exactly ``k`` (possibly empty) segments."""
    return optimal_partitions(values, k)[-1]


def brute_force_partition(values, k: int) -> PartitionResult:
    """Exhaustive search over all nondecreasing cut tuples (small inputs only)."""
    table = _check(values, k)
    n = table.count
    if n > BRUTE_FORCE_MAX_N:
        raise ValidationError("oracle limited to small instances")
    best = None
    for inner in itertools.combinations_with_replacement(range(n + 1), k - 1):
        cuts = (0, *inner, n)
        res = _result(table, cuts)
        if best is None or res.objective < best.objective:
            best = res
    return best
