"""Distribution generators for the experiment battery.

Three discrete families are built on the event indices k = 1..n by
evaluating a density formula at k = 1..n-1 and letting the final bin
absorb the remainder 1 - sum so the vector is exactly normalized:

* zipf: P{X=k} proportional to k^(-a), a = 1.01 by default (this one
  is normalized directly, no remainder bin);
* normal-discrete: density exp(-(k - 0.51 n)^2 / (2n)) / sqrt(2 pi n);
* rayleigh-discrete: (k / b^2) exp(-k^2 / (2 b^2)) with b = n / 2.5.

A non-positive remainder would mean the density already overshoots 1 on
the first n - 1 bins; that cannot happen for these parameter choices
and is treated as a hard error rather than clipped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from nmim.measure import Distribution


class SourceKind(str, Enum):
    EXPLICIT = "explicit"
    UNIFORM = "uniform"
    ZIPF = "zipf"
    NORMAL_DISCRETE = "normal-discrete"
    RAYLEIGH_DISCRETE = "rayleigh-discrete"


def uniform_source(n: int) -> Distribution:
    """The uniform distribution on n events."""
    if n < 1:
        raise ValueError(f"event count must be >= 1, got {n!r}")
    return Distribution([1.0 / n] * n)


def zipf_source(n: int, exponent: float = 1.01) -> Distribution:
    """Zipf weights k^(-exponent) on k = 1..n, normalized."""
    if n < 1:
        raise ValueError(f"event count must be >= 1, got {n!r}")
    k = np.arange(1, n + 1, dtype=float)
    w = k**-exponent
    return Distribution(w / w.sum())


def _density_with_remainder_bin(density: np.ndarray, n: int, label: str) -> Distribution:
    total = float(density.sum())
    remainder = 1.0 - total
    if remainder <= 0.0:
        raise ValueError(
            f"{label} density mass {total!r} on the first {n - 1} bins "
            "leaves no probability for the final bin"
        )
    return Distribution(list(density) + [remainder])


def normal_discrete_source(n: int) -> Distribution:
    """Discretized normal with mean 0.51 n and variance n.

    The density is evaluated at k = 1..n-1; bin n takes the remainder.
    """
    if n < 2:
        raise ValueError(f"event count must be >= 2, got {n!r}")
    k = np.arange(1, n, dtype=float)
    mu, var = 0.51 * n, float(n)
    density = np.exp(-((k - mu) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    return _density_with_remainder_bin(density, n, "normal")


def rayleigh_discrete_source(n: int) -> Distribution:
    """Discretized Rayleigh with scale b = n / 2.5.

    The density (k / b^2) e^(-k^2 / (2 b^2)) is evaluated at
    k = 1..n-1; bin n takes the remainder.
    """
    if n < 2:
        raise ValueError(f"event count must be >= 2, got {n!r}")
    b = n / 2.5
    k = np.arange(1, n, dtype=float)
    density = (k / b**2) * np.exp(-(k**2) / (2.0 * b**2))
    return _density_with_remainder_bin(density, n, "rayleigh")


@dataclass(frozen=True)
class SourceSpec:
    """Declarative description of a source, as the CLI ingests it."""

    kind: SourceKind
    n: int = 0
    probs: tuple[float, ...] | None = None
    zipf_exponent: float = 1.01

    def make(self) -> Distribution:
        if self.kind is SourceKind.EXPLICIT:
            if self.probs is None:
                raise ValueError("explicit source needs a probability vector")
            return Distribution(self.probs)
        if self.kind is SourceKind.UNIFORM:
            return uniform_source(self.n)
        if self.kind is SourceKind.ZIPF:
            return zipf_source(self.n, self.zipf_exponent)
        if self.kind is SourceKind.NORMAL_DISCRETE:
            return normal_discrete_source(self.n)
        if self.kind is SourceKind.RAYLEIGH_DISCRETE:
            return rayleigh_discrete_source(self.n)
        raise ValueError(f"unknown source kind {self.kind!r}")
