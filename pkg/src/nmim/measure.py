"""Core importance mathematics in overflow-safe log-domain form.

The importance of a single event with probability p is

    M(p) = p * e^((1 - p) / p),        L(p) = ln M(p) = ln p + (1 - p) / p,

and the importance of a whole distribution is the log of the mean
event importance,

    score(p_1..p_n) = ln sum_i p_i e^((1 - p_i) / p_i).

M(p) overflows 64-bit floats already for p < ~1/700, so nothing in this
package ever exponentiates 1/p: every quantity is carried as a log and
sums of importances go through log-sum-exp. Natural logarithms
throughout; entropy (bits) lives in :mod:`nmim.transmission` and the two
unit systems never mix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from nmim.numerics import logsumexp

#: Tolerance on sum(probs) == 1 at construction. Inputs further out are
#: rejected, not renormalized; silent renormalization would make
#: results depend on how far off the input was.
NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class Distribution:
    """A finite probability vector with strictly positive entries.

    Parameters
    ----------
    probs : sequence of float
        Event probabilities, each in (0, 1], summing to 1 within
        ``NORMALIZATION_TOL``. Order is preserved; downstream length
        allocation relies on index alignment.
    """

    probs: tuple[float, ...]

    def __init__(self, probs: Iterable[float]):
        values = tuple(float(p) for p in probs)
        if len(values) < 1:
            raise ValueError("a distribution needs at least one event")
        arr = np.asarray(values)
        if np.any(arr <= 0.0):
            raise ValueError("probabilities must be strictly positive")
        if np.any(arr > 1.0):
            raise ValueError("probabilities must not exceed 1")
        total = float(arr.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", values)

    @property
    def n(self) -> int:
        """Number of events."""
        return len(self.probs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)


@dataclass(frozen=True)
class ImportanceScore:
    """Log-domain importance value in nats.

    ``log_value`` is L(p) for a single event or the distribution score
    for a whole distribution; both are finite for every valid input.
    """

    log_value: float


def log_importance_values(probs: Sequence[float] | np.ndarray) -> np.ndarray:
    """Vectorized L(p) = ln p + (1 - p) / p over an array of probabilities."""
    arr = np.asarray(probs, dtype=float)
    return np.log(arr) + (1.0 - arr) / arr


def log_event_importance(p: float) -> ImportanceScore:
    """Log importance L(p) of a single event.

    Parameters
    ----------
    p : float
        Event probability in (0, 1].

    Returns
    -------
    ImportanceScore
        L(p) = ln p + (1 - p) / p, computed without forming e^(1/p).
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"probability must be in (0, 1], got {p!r}")
    return ImportanceScore(math.log(p) + (1.0 - p) / p)


def nmim(d: Distribution) -> ImportanceScore:
    """Importance score of a distribution.

    Computed as log-sum-exp over the per-event terms
    ln p_i + (1 - p_i) / p_i, so arbitrarily rare events cannot
    overflow. The result is >= 0, with a sharper lower bound of n - 1
    attained exactly by the uniform distribution.
    """
    if not isinstance(d, Distribution):
        d = Distribution(d)
    return ImportanceScore(logsumexp(log_importance_values(d.as_array())))


def nmim_uniform(n: int) -> ImportanceScore:
    """Closed-form importance score of the uniform distribution on n events.

    Equals n - 1 exactly; no summation is performed, so this also serves
    as an independent check on :func:`nmim` at large n.
    """
    if n < 1:
        raise ValueError(f"event count must be >= 1, got {n!r}")
    return ImportanceScore(float(n - 1))


def taylor_L(p: float, dp: float, order: int) -> float:
    """Truncated Taylor expansion of L(p + dp) around p.

    L(p + dp) ~ L(p) + sum_{k=1..order} (-1)^k (k - p) / (k p^(k+1)) dp^k.
    The error is O(dp^(order+1)) while p + dp stays inside (0, 1].

    Parameters
    ----------
    p : float
        Expansion point in (0, 1].
    dp : float
        Increment; p + dp must remain in (0, 1].
    order : int
        Number of Taylor terms beyond L(p), >= 1.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"probability must be in (0, 1], got {p!r}")
    if not 0.0 < p + dp <= 1.0:
        raise ValueError(f"p + dp = {p + dp!r} leaves (0, 1]")
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order!r}")
    total = log_event_importance(p).log_value
    for k in range(1, order + 1):
        sign = -1.0 if k % 2 else 1.0
        total += sign * (k - p) / (k * p ** (k + 1)) * dp**k
    return total
