"""Small numeric helpers shared across the package.

Everything importance-related is carried in log space, so the two
workhorses here are a max-subtraction log-sum-exp and a bracketing
bisection solver. Both are deliberately dependency-free.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np


def logsumexp(values: Sequence[float] | np.ndarray) -> float:
    """Compute log(sum(exp(values))) without overflow.

    Subtracts the maximum before exponentiating, so inputs of any
    magnitude are safe as long as they are finite.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("logsumexp of an empty sequence")
    m = float(arr.max())
    if math.isinf(m):
        return m
    return m + math.log(float(np.exp(arr - m).sum()))


def log_expm1(b: float) -> float:
    """Compute log(exp(b) - 1) for b > 0 without overflow.

    For large b this is b + log1p(-exp(-b)) ~ b; for small b it falls
    back on expm1 directly.
    """
    if b <= 0:
        raise ValueError("log_expm1 requires b > 0")
    if b > 30.0:
        return b + math.log1p(-math.exp(-b))
    return math.log(math.expm1(b))


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Find a root of f on [lo, hi] by bisection.

    The endpoints must bracket a sign change (an endpoint evaluating to
    exactly zero is returned as-is). Stops when the interval width falls
    below tol.
    """
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or (hi - lo) < tol:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
