"""Numerical checks of the variance/revenue inequalities.

Each ``check_*`` function evaluates both sides of one inequality and
returns a :class:`BoundCheck`. Violations are reported, never raised: the
caller decides whether a violation is fatal.

Notation: ``B`` mean bid, ``R`` best single-price revenue, ``S = B - R``
the separation, ``sigma2`` the (population) bid variance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RevenueReport, ValidationError
from .pricing import empirical_optimal_reserve

REL_TOL = 1e-9


@dataclass(frozen=True)
class DistributionSummary:
    mean_bid: float
    monopoly_revenue: float
    separation: float
    variance: float


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    slack: float

    def line(self) -> str:
        return f"{self.name} {self.lhs!r} {self.rhs!r} {self.satisfied} {self.slack!r}"


def _le(name: str, lhs: float, rhs: float) -> BoundCheck:
    slack = rhs - lhs
    tol = REL_TOL * max(1.0, abs(lhs), abs(rhs))
    return BoundCheck(name, float(lhs), float(rhs), bool(slack >= -tol), float(slack))


def _ge(name: str, lhs: float, rhs: float) -> BoundCheck:
    slack = lhs - rhs
    tol = REL_TOL * max(1.0, abs(lhs), abs(rhs))
    return BoundCheck(name, float(lhs), float(rhs), bool(slack >= -tol), float(slack))


def summarize_empirical(bids) -> DistributionSummary:
    bids = np.asarray(bids, dtype=float).reshape(-1)
    if bids.size == 0:
        raise ValidationError("empty bid list")
    B = float(bids.mean())
    _, R = empirical_optimal_reserve(bids)
    return DistributionSummary(B, R, B - R, float(np.mean((bids - B) ** 2)))


def _require_revenue(d: DistributionSummary):
    if not d.monopoly_revenue > 0:
        raise ValidationError("degenerate zero-revenue distribution")


def check_variance_lower_bound(d: DistributionSummary) -> BoundCheck:
    """``sigma2 >= 2 R^2 exp(S/R) - B^2 - R^2``."""
    _require_revenue(d)
    R, B = d.monopoly_revenue, d.mean_bid
    with np.errstate(over="ignore"):
        rhs = 2 * R * R * np.exp(d.separation / R) - B * B - R * R
    return _ge("variance_lower_bound", d.variance, float(rhs))


def check_separation_bound(d: DistributionSummary) -> tuple[BoundCheck, BoundCheck]:
    """``S <= (3R)^(1/3) sigma^(2/3) <= (3B)^(1/3) sigma^(2/3)``."""
    _require_revenue(d)
    s23 = np.cbrt(d.variance)  # sigma^(2/3)
    first = float(np.cbrt(3 * d.monopoly_revenue) * s23)
    second = float(np.cbrt(3 * d.mean_bid) * s23)
    return (_le("separation_bound_revenue", d.separation, first),
            _le("separation_bound_mean", d.separation, second))


def check_approx_ratio(d: DistributionSummary) -> BoundCheck:
    """``B / R <= 4.78 + 2 ln(1 + sigma2 / B^2)``."""
    _require_revenue(d)
    if not d.mean_bid > 0:
        raise ValidationError("mean bid must be positive")
    B = d.mean_bid
    cv = math.sqrt(d.variance) / B  # avoids underflow of B * B
    rhs = 4.78 + 2 * math.log1p(cv * cv)
    return _le("approx_ratio", B / d.monopoly_revenue, rhs)


def check_all(d: DistributionSummary) -> list[BoundCheck]:
    return [check_variance_lower_bound(d), *check_separation_bound(d), check_approx_ratio(d)]


def equal_revenue_summary(M: float) -> DistributionSummary:
    """Equal-revenue law truncated at ``M`` (atom of mass ``1/M`` at ``M``).

    ``P(b >= x) = 1`` below 1 and ``1/x`` on ``[1, M]``, so every price in
    ``[1, M]`` earns exactly 1. Integrating the survival function gives
    ``E[b] = 1 + ln M`` and ``E[b^2] = 2M - 1``, hence
    ``var = 2 (M - 1 - ln M - ln(M)^2 / 2)``, roughly ``ln(M)^3 / 3`` near 1.
    """
    if not M > 1:
        raise ValidationError("M must be > 1")
    u = math.log(M)
    # expm1 keeps M - 1 - u - u^2/2 accurate as M -> 1.
    var = 2.0 * (math.expm1(u) - u - 0.5 * u * u)
    return DistributionSummary(1.0 + u, 1.0, u, var)


def generalization_gap(m: int, k: int, delta: float) -> float:
    """Uniform deviation term for piecewise reserves with ``k`` cells.

    ``2 sqrt(ln(1/delta) / 2m) + 4 sqrt(2 ln Pi / m)`` with the growth
    function bounded by ``m^(2k-1) / k^k``. Meaningful only for bids in
    ``[0, 1]``; that is not checked here.
    """
    if not 0 < delta <= 1:
        raise ValidationError("delta must lie in (0, 1]")
    if m < 2 or k < 1:
        raise ValidationError("need m >= 2 and k >= 1")
    log_growth = max(0.0, (2 * k - 1) * math.log(m) - k * math.log(k))
    return 2 * math.sqrt(math.log(1 / delta) / (2 * m)) + 4 * math.sqrt(2 * log_growth / m)


def offset_lemma_rhs(eta_sq: float) -> float:
    if eta_sq < 0:
        raise ValidationError("squared loss must be >= 0")
    eta = math.sqrt(eta_sq)
    return math.sqrt(eta) + 2 * eta ** (2 / 3)


def check_offset_lemma(S_observed: float, eta_sq: float, tolerance: float = 0.0) -> BoundCheck:
    """Observed separation of the theoretical offset rule vs its guarantee.

    ``tolerance`` absorbs Monte Carlo error in ``S_observed``.
    """
    return _le("offset_lemma", S_observed, offset_lemma_rhs(eta_sq) + tolerance)


def weighted_std(report: RevenueReport) -> float:
    """``sum_j m_j sigma_j`` over the cells of a revenue report."""
    return float(sum(c.count * c.std for c in report.per_cell))


def pairwise_spread(groups) -> float:
    """``sum_j sqrt(sum_{i,i' in j} (b_i - b_i')^2)``; equals ``sqrt(2) * sum_j m_j sigma_j``."""
    total = 0.0
    for g in groups:
        g = np.asarray(g, dtype=float)
        total += math.sqrt(float(np.sum((g[:, None] - g[None, :]) ** 2)))
    return total


def check_cluster_bound(report: RevenueReport) -> BoundCheck:
    """``S_hat <= (3 B_hat)^(1/3) (sum_j m_j sigma_j / m)^(2/3)`` on one sample.

    Holds whenever each cell is priced at its own empirical optimum.
    """
    m = report.count
    if m == 0:
        raise ValidationError("empty report")
    rhs = float(np.cbrt(3 * report.mean_bid) * np.cbrt(weighted_std(report) / m) ** 2)
    return _le("cluster_bound", report.separation, rhs)


def corollary_constant() -> float:
    """``12^(1/3)``: leading constant of the separation rate when ``B = 1``."""
    return float(np.cbrt(12.0))
