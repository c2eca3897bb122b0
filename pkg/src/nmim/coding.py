"""Importance-weighted code-length allocation for compressed storage.

A total budget of K code symbols is divided among n events so that an
importance-weighted reconstruction-error objective is minimized. Two
error models are supported:

* reciprocal: error of an event decays like 1/l with its length, giving
  the closed-form optimum l_i = ceil(sqrt(M(p_i)) / sum_j sqrt(M(p_j)) * K);
* exponent: error decays like gamma^(-l), giving a water-filling
  solution l_i = ceil((ln M(p_i) - mean_active ln M + K ln(gamma)/N')/ln(gamma))
  over the active set N' of events that earn a positive length.

Budgets larger than the per-event cap L are handled by an iterative
clamp-and-resolve loop: clamp the longest over-cap assignment to L,
subtract L from the budget, drop that event, re-solve on the rest.

All share arithmetic happens in log space (importances overflow floats
long before probabilities get interesting), and objective values are
reported as logs for the same reason.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from nmim.measure import Distribution, log_importance_values
from nmim.numerics import logsumexp

#: Brute-force oracle guards: enumeration is exponential in n.
ORACLE_MAX_EVENTS = 6
ORACLE_MAX_TOTAL = 30


class ErrorModel(str, Enum):
    """Reconstruction-error-vs-length model used as the coding objective."""

    RECIPROCAL = "reciprocal"
    EXPONENT = "exponent"


@dataclass(frozen=True)
class AllocationProblem:
    """One code-length optimization instance.

    Parameters
    ----------
    source : Distribution
        Event probabilities; lengths stay index-aligned with it.
    K : int
        Total length budget in code symbols.
    L : int
        Initial (maximum) per-event length in symbols.
    model : ErrorModel
        Which error model the objective uses.
    gamma : int
        Code alphabet size, >= 2; only the exponent model reads it.
    """

    source: Distribution
    K: int
    L: int
    model: ErrorModel
    gamma: int = 2

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError(f"budget K must be >= 1, got {self.K!r}")
        if self.L < 1:
            raise ValueError(f"initial length L must be >= 1, got {self.L!r}")
        if self.gamma < 2:
            raise ValueError(f"alphabet size gamma must be >= 2, got {self.gamma!r}")
        if self.model is ErrorModel.RECIPROCAL and self.K < self.source.n:
            raise ValueError(
                f"reciprocal model needs K >= n so every event gets a symbol; "
                f"got K={self.K}, n={self.source.n}"
            )


@dataclass(frozen=True)
class AllocationResult:
    """Integer lengths plus the derived quality numbers.

    ``importance_loss`` is the log of the objective value. ``n_active``
    counts events with a positive length (always n under the reciprocal
    model). The realized total sum(lengths) may exceed the nominal K
    because of ceiling; the pre-ceiling real lengths sum to K exactly.
    """

    lengths: tuple[int, ...]
    importance_loss: float
    avg_length: float
    compression_ratio: float
    n_active: int


def importance_loss(
    d: Distribution,
    lengths: Sequence[int],
    model: ErrorModel,
    gamma: int = 2,
) -> float:
    """Log of the importance-weighted reconstruction error.

    Reciprocal model: ln sum_i M(p_i)/l_i, all lengths >= 1 required.
    Exponent model: ln sum_i M(p_i) gamma^(-l_i), zero lengths allowed
    (an uncoded event contributes its full importance).
    """
    lens = np.asarray(lengths, dtype=float)
    if lens.shape != (d.n,):
        raise ValueError(f"expected {d.n} lengths, got {lens.shape}")
    if np.any(lens < 0):
        raise ValueError("lengths must be nonnegative")
    log_m = log_importance_values(d.as_array())
    if model is ErrorModel.RECIPROCAL:
        if np.any(lens < 1):
            raise ValueError("reciprocal model cannot score a zero-length event")
        return logsumexp(log_m - np.log(lens))
    return logsumexp(log_m - lens * math.log(gamma))


def _reciprocal_real_lengths(probs: np.ndarray, budget: int) -> np.ndarray:
    """Pre-ceiling optimal real lengths, shares computed in log space."""
    half_log_m = 0.5 * log_importance_values(probs)
    return np.exp(half_log_m - logsumexp(half_log_m)) * budget


def _exponent_real_lengths(
    probs: np.ndarray, budget: int, gamma: int
) -> tuple[np.ndarray, np.ndarray]:
    """Water-filling real lengths and the active index set.

    Starts with every event active; while the least important active
    event would get a non-positive length, drops it and re-solves. The
    active real lengths always sum to the budget exactly.
    """
    log_m = log_importance_values(probs)
    log_gamma = math.log(gamma)
    by_importance = np.argsort(-log_m, kind="stable")
    count = len(probs)
    while True:
        active = by_importance[:count]
        real_active = (log_m[active] - log_m[active].mean()) / log_gamma + budget / count
        if count == 1 or real_active.min() > 0.0:
            break
        count -= 1
    real = np.zeros(len(probs))
    real[active] = real_active
    return real, active


def _ceil_lengths(real: np.ndarray, model: ErrorModel) -> np.ndarray:
    if model is ErrorModel.RECIPROCAL:
        # Shares can underflow to zero for extremely rare companions of
        # a dominant event; every event still needs one symbol.
        return np.maximum(np.ceil(real), 1.0).astype(int)
    return np.where(real > 0.0, np.ceil(real), 0.0).astype(int)


def _solve_raw(
    probs: np.ndarray, budget: int, model: ErrorModel, gamma: int
) -> tuple[np.ndarray, int]:
    """Formula lengths for a (possibly unnormalized) probability block."""
    if model is ErrorModel.RECIPROCAL:
        lengths = _ceil_lengths(_reciprocal_real_lengths(probs, budget), model)
        return lengths, len(probs)
    real, active = _exponent_real_lengths(probs, budget, gamma)
    return _ceil_lengths(real, model), len(active)


def _build_result(problem: AllocationProblem, lengths: np.ndarray) -> AllocationResult:
    probs = problem.source.as_array()
    avg = float(np.dot(probs, lengths))
    return AllocationResult(
        lengths=tuple(int(v) for v in lengths),
        importance_loss=importance_loss(
            problem.source, lengths, problem.model, problem.gamma
        ),
        avg_length=avg,
        compression_ratio=avg / problem.L,
        n_active=int(np.count_nonzero(lengths)),
    )


def allocate_reciprocal(problem: AllocationProblem) -> AllocationResult:
    """Closed-form optimal lengths under the reciprocal error model.

    Requires K <= L (so no per-event cap can bind) and K >= n. For
    budgets beyond L use :func:`cap_and_iterate`.
    """
    if problem.model is not ErrorModel.RECIPROCAL:
        raise ValueError("problem.model must be RECIPROCAL")
    if problem.K > problem.L:
        raise ValueError(
            f"single-shot allocation needs K <= L, got K={problem.K} > L={problem.L}; "
            "use cap_and_iterate"
        )
    lengths, _ = _solve_raw(
        problem.source.as_array(), problem.K, problem.model, problem.gamma
    )
    return _build_result(problem, lengths)


def allocate_exponent(problem: AllocationProblem) -> AllocationResult:
    """Water-filling optimal lengths under the exponent error model.

    Requires K <= L. Events outside the active set receive length 0.
    """
    if problem.model is not ErrorModel.EXPONENT:
        raise ValueError("problem.model must be EXPONENT")
    if problem.K > problem.L:
        raise ValueError(
            f"single-shot allocation needs K <= L, got K={problem.K} > L={problem.L}; "
            "use cap_and_iterate"
        )
    probs = problem.source.as_array()
    real, active = _exponent_real_lengths(probs, problem.K, problem.gamma)
    lengths = _ceil_lengths(real, problem.model)
    result = _build_result(problem, lengths)
    # n_active comes from the water-filling set, not the nonzero count
    # (they agree: active real lengths are strictly positive).
    assert result.n_active == len(active)
    return result


def cap_and_iterate(problem: AllocationProblem) -> AllocationResult:
    """Allocate under a binding per-event cap by clamp-and-resolve.

    Works for any budget up to n * L. Each round solves the formula
    allocation on the still-free events; if the longest assignment
    exceeds L it is clamped to L (lowest index first on ties), that
    event is removed, the budget drops by L, and the round repeats. At
    most n rounds run. When K <= L and nothing exceeds the cap this is
    identical to the single-shot allocation.
    """
    n = problem.source.n
    if problem.K > n * problem.L:
        raise ValueError(
            f"budget K={problem.K} cannot fit under cap L={problem.L} "
            f"with n={n} events"
        )
    probs = problem.source.as_array()
    free = list(range(n))
    final = np.zeros(n, dtype=int)
    budget = problem.K
    while True:
        block_lengths, _ = _solve_raw(
            probs[free], budget, problem.model, problem.gamma
        )
        over = block_lengths > problem.L
        if not over.any():
            break
        j = int(np.argmax(block_lengths))
        final[free[j]] = problem.L
        budget -= problem.L
        free.pop(j)
    final[free] = block_lengths
    return _build_result(problem, final)


def baseline_equal(d: Distribution, budget: int) -> tuple[int, ...]:
    """Even split of the budget: first budget mod n events get one extra symbol."""
    if budget < d.n:
        raise ValueError(f"budget {budget} below event count {d.n}")
    base, extra = divmod(budget, d.n)
    return tuple(base + 1 if i < extra else base for i in range(d.n))


def baseline_proportional(d: Distribution, budget: int) -> tuple[int, ...]:
    """Inverse-probability split: l_i = ceil(budget * (1 - p_i) / sum_j (1 - p_j)).

    Rarer events get more symbols; with a single event the whole budget
    goes to it.
    """
    if budget < d.n:
        raise ValueError(f"budget {budget} below event count {d.n}")
    if d.n == 1:
        return (budget,)
    probs = d.as_array()
    weights = 1.0 - probs
    return tuple(int(v) for v in np.ceil(budget * weights / weights.sum()).astype(int))


def _compositions(
    total: int, slots: int, lo: int, hi: int
) -> Iterator[tuple[int, ...]]:
    """All slot-tuples of integers in [lo, hi] summing to total, lexicographic."""
    if slots == 1:
        if lo <= total <= hi:
            yield (total,)
        return
    first_max = min(hi, total - lo * (slots - 1))
    for head in range(lo, first_max + 1):
        for rest in _compositions(total - head, slots - 1, lo, hi):
            yield (head,) + rest


def oracle_allocate(
    d: Distribution,
    total: int,
    cap: int,
    model: ErrorModel,
    gamma: int = 2,
) -> AllocationResult:
    """Exhaustive-search optimal allocation at an exact realized total.

    Enumerates every integer length vector with sum(l) == total and
    l_i <= cap (l_i >= 1 under the reciprocal model), returning the one
    with the smallest objective; ties go to the lexicographically
    smallest vector. Deliberately brute-force: this is the independent
    check the formula allocators are tested against.
    """
    if d.n > ORACLE_MAX_EVENTS or total > ORACLE_MAX_TOTAL:
        raise ValueError(
            f"oracle limited to n <= {ORACLE_MAX_EVENTS}, total <= {ORACLE_MAX_TOTAL}"
        )
    lo = 1 if model is ErrorModel.RECIPROCAL else 0
    if not d.n * lo <= total <= d.n * cap:
        raise ValueError(
            f"no length vector with sum {total} fits n={d.n}, cap={cap}, min={lo}"
        )
    best: tuple[int, ...] | None = None
    best_loss = math.inf
    for cand in _compositions(total, d.n, lo, cap):
        loss = importance_loss(d, cand, model, gamma)
        if loss < best_loss:
            best, best_loss = cand, loss
    assert best is not None
    probs = d.as_array()
    avg = float(np.dot(probs, best))
    return AllocationResult(
        lengths=best,
        importance_loss=best_loss,
        avg_length=avg,
        compression_ratio=avg / cap,
        n_active=int(sum(1 for v in best if v > 0)),
    )
