"""Minimum-probability dominance analysis.

The importance score of a distribution is usually carried almost
entirely by its rarest event: under either of two sufficient conditions
(a very small minimum probability, or a large alphabet) the whole-
distribution score exceeds L(p_min) by at most ln 2. This module
computes that gap, the x = p1/p2 ratio intervals on which one event's
importance provably dominates another's by a factor of n - 1, and the
split/merge distribution surgery used to study how refining events
moves the score.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from nmim.measure import Distribution, ImportanceScore, log_event_importance, nmim
from nmim.numerics import bisect_root

#: Operationalization of "p_min much smaller than 1/(1 + ln(n-1))":
#: condition i holds when p_min <= CONDITION_I_FACTOR / (1 + ln(n-1)).
CONDITION_I_FACTOR = 0.1

#: Condition ii holds when the alphabet has at least this many events.
CONDITION_II_MIN_N = 100


class ThresholdRegime(str, Enum):
    """Which asymptotic regime produced a threshold interval."""

    LARGE_N = "large-n"
    SMALL_PMIN = "small-pmin"


@dataclass(frozen=True)
class GapReport:
    """Gap between a distribution's score and its rarest event's importance.

    ``gap = nmim_total - l_pmin`` is always >= 0; it is <= ln 2 whenever
    ``condition_i`` (small minimum probability) or ``condition_ii``
    (large alphabet) holds.
    """

    nmim_total: ImportanceScore
    l_pmin: ImportanceScore
    gap: float
    p_min: float
    p_smin: float
    condition_i: bool
    condition_ii: bool


@dataclass(frozen=True)
class ThresholdReport:
    """Ratio interval [x1, x2] on which dominance by a factor n - 1 holds.

    For x = p1/p2 inside the interval, M(p1)/M(p2) >= n - 1. Intervals
    from :func:`dominance_thresholds_exact` satisfy this to bisection
    tolerance; the closed-form endpoints are asymptotic and overshoot the
    exact boundary slightly on both sides.
    """

    x1: float
    x2: float
    regime: ThresholdRegime


def min_gap(d: Distribution) -> GapReport:
    """Compare a distribution's score against its minimum-probability event.

    Parameters
    ----------
    d : Distribution
        At least two events, with a unique minimum probability.

    Returns
    -------
    GapReport
        The score, L(p_min), their gap in nats, the two smallest
        probabilities, and which sufficient conditions hold.
    """
    if d.n < 2:
        raise ValueError("gap analysis needs at least two events")
    arr = d.as_array()
    order = np.argsort(arr, kind="stable")
    p_min = float(arr[order[0]])
    p_smin = float(arr[order[1]])
    if p_min == p_smin:
        raise ValueError(f"minimum probability {p_min!r} is not unique")
    total = nmim(d)
    l_min = log_event_importance(p_min)
    cond_i = p_min <= CONDITION_I_FACTOR / (1.0 + math.log(d.n - 1))
    cond_ii = d.n >= CONDITION_II_MIN_N
    return GapReport(
        nmim_total=total,
        l_pmin=l_min,
        gap=total.log_value - l_min.log_value,
        p_min=p_min,
        p_smin=p_smin,
        condition_i=cond_i,
        condition_ii=cond_ii,
    )


def _validate_threshold_args(n: int, p1: float | None) -> None:
    if n < 2:
        raise ValueError(f"event count must be >= 2, got {n!r}")
    if p1 is not None and not 0.0 < p1 < 1.0 / n:
        raise ValueError(f"p1 must lie in (0, 1/n), got {p1!r} with n={n}")


def dominance_thresholds(n: int, p1: float | None = None) -> ThresholdReport:
    """Closed-form dominance interval endpoints.

    With ``p1`` omitted the large-alphabet regime applies:
    x1 = e^(ln(n-1) - n), x2 = 1 - ln(n-1)/(n-1). With ``p1`` given
    (the minimum probability, < 1/n) the small-minimum regime applies:
    x1 = e^(ln(n-1) - 1/p1), x2 = 1 - (p1/(1-p1)) ln(n-1).

    These are the asymptotic closed forms; see
    :func:`dominance_thresholds_exact` for the root-finding variant used
    to cross-check them.
    """
    _validate_threshold_args(n, p1)
    log_nm1 = math.log(n - 1)
    if p1 is None:
        x1 = math.exp(log_nm1 - n)
        x2 = 1.0 - log_nm1 / (n - 1)
        return ThresholdReport(x1=x1, x2=x2, regime=ThresholdRegime.LARGE_N)
    x1 = math.exp(log_nm1 - 1.0 / p1)
    x2 = 1.0 - p1 / (1.0 - p1) * log_nm1
    return ThresholdReport(x1=x1, x2=x2, regime=ThresholdRegime.SMALL_PMIN)


def dominance_thresholds_exact(n: int, p1: float | None = None) -> ThresholdReport:
    """Dominance interval endpoints by direct root-finding.

    Solves ln x + c (1 - x) = ln(n - 1) exactly (to bisection tolerance),
    where c = n in the large-alphabet regime and c = 1/p1 in the
    small-minimum regime. The closed forms of
    :func:`dominance_thresholds` sit just outside these roots (the closed
    interval contains the exact one) and converge to them as the regime
    parameter grows.
    """
    _validate_threshold_args(n, p1)
    c = float(n) if p1 is None else 1.0 / p1
    regime = ThresholdRegime.LARGE_N if p1 is None else ThresholdRegime.SMALL_PMIN
    target = math.log(n - 1)

    def f(x: float) -> float:
        return math.log(x) + c * (1.0 - x) - target

    peak = 1.0 / c
    if f(peak) < 0.0:
        raise ValueError(f"no dominance interval exists for n={n}, p1={p1!r}")
    # Lower root: solve in u = ln x to keep the bracket representable
    # even when the root itself is astronomically small.
    def g(u: float) -> float:
        return u + c * (1.0 - math.exp(u)) - target

    u1 = bisect_root(g, -(c + 50.0), math.log(peak), tol=1e-13)
    x2 = bisect_root(f, peak, 1.0, tol=1e-15)
    return ThresholdReport(x1=math.exp(u1), x2=x2, regime=regime)


def split_event(d: Distribution, index: int, fraction: float) -> Distribution:
    """Split one event into two sub-events with the given mass fraction.

    Event ``index`` with probability p is replaced, in place, by the
    pair (fraction * p, (1 - fraction) * p). Splitting never decreases
    the distribution's importance score.
    """
    if not 0 <= index < d.n:
        raise IndexError(f"event index {index} out of range for n={d.n}")
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be strictly inside (0, 1), got {fraction!r}")
    probs = list(d.probs)
    p = probs.pop(index)
    probs[index:index] = [fraction * p, (1.0 - fraction) * p]
    return Distribution(probs)


def merge_events(d: Distribution, i: int, j: int) -> Distribution:
    """Merge two events into one carrying their combined probability.

    The merged event takes the earlier of the two positions. Merging
    never increases the distribution's importance score.
    """
    if not 0 <= i < d.n or not 0 <= j < d.n:
        raise IndexError(f"event indices ({i}, {j}) out of range for n={d.n}")
    if i == j:
        raise ValueError("merge needs two distinct events")
    lo, hi = min(i, j), max(i, j)
    probs = list(d.probs)
    probs[lo] = probs[lo] + probs[hi]
    del probs[hi]
    return Distribution(probs)
