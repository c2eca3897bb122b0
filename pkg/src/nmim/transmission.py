"""Importance change over a binary symmetric channel, the loss-distortion
function of a Bernoulli source, and the maximum-transmission planner.

Three related questions about importance surviving a noisy hop:

* how much importance does a Bernoulli(p) source lose crossing a binary
  symmetric channel with crossover epsilon (``psi``), together with a
  first-order approximation eps*s(p), a finer correction-preserving
  approximation, and loose +/- ln 2 bounds;
* what is the largest importance loss any conditional distribution can
  inflict within Hamming distortion D (``rmim``), its plateau value
  ``delta_plateau``, a brute-force grid oracle, and the inverse ``dmim``;
* given a capacity-time budget C*t and an importance-loss allowance
  Delta, how much entropy can the receiving side get (``plan_max_transmission``).

Importance quantities are in nats; entropies (and C*t) are in bits. The
two unit systems never mix: Delta is compared against delta_plateau in
nats, entropy ceilings are evaluated in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from nmim.numerics import bisect_root, log_expm1, logsumexp

LN2 = math.log(2.0)


@dataclass(frozen=True)
class BscChannel:
    """A binary symmetric channel with crossover probability epsilon."""

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError(f"crossover must be in [0, 0.5), got {self.epsilon!r}")


@dataclass(frozen=True)
class PsiChange:
    """Importance change of a Bernoulli(p) source across a BSC, in nats.

    ``exact`` is the two-term score difference; ``coarse`` is the
    first-order eps*s(p) approximation; ``fine`` keeps the correction
    term the coarse form drops. The loose bounds are exact +/- ln 2
    around L(p_xm) - L(p_ym); they are None when the output minimum is
    not unique (p = 0.5).
    """

    exact: float
    coarse: float
    fine: float
    lower_bound: float | None
    upper_bound: float | None


class PlanRegime(str, Enum):
    """Which branch of the transmission planner applied."""

    EXACT = "exact"
    GROWTH = "growth"
    SATURATION = "saturation"


@dataclass(frozen=True)
class TransmissionPlan:
    """Inputs and outcome of the maximum-received-entropy problem.

    ``delta_max`` (nats) is the importance-loss allowance, ``capacity``
    (bits/use) times ``time`` (uses) is the information budget, ``p0``
    solves H(p0) = C*t, and ``max_entropy`` (bits) is the best received
    entropy under both constraints.
    """

    delta_max: float
    capacity: float
    time: float
    p0: float
    regime: PlanRegime
    max_entropy: float


@dataclass(frozen=True)
class DistortionCurve:
    """Sampled loss-distortion curve (D, R) for one source parameter p."""

    p: float
    points: tuple[tuple[float, float], ...]
    delta_p: float


def _two_term_score(t: float) -> float:
    """Score of the Bernoulli(t) distribution (t, 1 - t), in log domain."""
    return logsumexp(
        [math.log(t) + (1.0 - t) / t, math.log1p(-t) + t / (1.0 - t)]
    )


def _log_m(t: float) -> float:
    """L(t) = ln t + (1 - t)/t for a scalar."""
    return math.log(t) + (1.0 - t) / t


def psi(p: float, ch: BscChannel) -> PsiChange:
    """Importance change of a Bernoulli(p) source over a BSC.

    Parameters
    ----------
    p : float
        Source parameter in (0, 0.5]. The output parameter is
        p' = p(1 - eps) + eps(1 - p), which stays in (0, 0.5].
    ch : BscChannel
        Channel with crossover eps. The coarse/fine approximations are
        meaningful for eps well below p; all fields are computed
        regardless so their error can be measured.

    Returns
    -------
    PsiChange
        exact, coarse, fine values and the +/- ln 2 bounds (None at
        p = 0.5 where the minimum-probability event is not unique).
    """
    if not 0.0 < p <= 0.5:
        raise ValueError(f"source parameter must be in (0, 0.5], got {p!r}")
    eps = ch.epsilon
    shift = eps * (1.0 - 2.0 * p)
    p_out = p + shift
    score_in = _two_term_score(p)
    exact = score_in - _two_term_score(p_out)

    s_p = (1.0 - p) * (1.0 - 2.0 * p) / (p * p)
    coarse = eps * s_p

    # Correction-preserving approximation: keep the term the coarse
    # form drops, everything in log domain so M(p) never materializes.
    a = (1.0 - p) / (p * p) * shift
    b = (3.0 * p * p - 3.0 * p + 1.0) / (p * p * (1.0 - p) * (1.0 - p)) * shift
    if b > 0.0:
        corrected = logsumexp([score_in, _log_m(1.0 - p) + log_expm1(b)])
    else:
        corrected = score_in
    fine = score_in + a - corrected

    if p == 0.5:
        lower: float | None = None
        upper: float | None = None
    else:
        center = _log_m(p) - _log_m(p_out)
        lower, upper = center - LN2, center + LN2
    return PsiChange(exact=exact, coarse=coarse, fine=fine, lower_bound=lower, upper_bound=upper)


def delta_plateau(p: float) -> float:
    """Plateau value of the loss-distortion curve for a Bernoulli(p) source.

    The largest importance loss any distortion level can produce:
    ln(p e^(1/p) + (1-p) e^(1/(1-p))) - 2 nats. Zero at p = 0.5.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"source parameter must be in (0, 1), got {p!r}")
    return _two_term_score(p) - 1.0


def rmim(p: float, D: float) -> float:
    """Maximum importance loss within Hamming distortion D, in nats.

    Piecewise: while the output parameter can stay on the same side of
    1/2 (p + D < 1/2 for p < 1/2, mirrored for p > 1/2) the loss grows
    as the score difference; past that the curve sits on the plateau
    delta_plateau(p). Identically zero at p = 0.5 and at D = 0.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"source parameter must be in (0, 1), got {p!r}")
    if D < 0.0:
        raise ValueError(f"distortion must be >= 0, got {D!r}")
    if p < 0.5 and p + D < 0.5:
        return _two_term_score(p) - _two_term_score(p + D)
    if p > 0.5 and p - D > 0.5:
        return _two_term_score(p) - _two_term_score(p - D)
    return delta_plateau(p)


def rmim_oracle(p: float, D: float, grid: int = 2000) -> float:
    """Brute-force check value for :func:`rmim`.

    Grid-searches the joint flip masses (p01, p10) with
    p01 + p10 <= D, p01 <= p, p10 <= 1 - p, minimizing the output
    distribution's score directly; returns input score minus that
    minimum. Agreement with :func:`rmim` is within about 2/grid.
    """
    if grid < 100:
        raise ValueError(f"grid must be >= 100, got {grid!r}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"source parameter must be in (0, 1), got {p!r}")
    if D < 0.0:
        raise ValueError(f"distortion must be >= 0, got {D!r}")
    p01_axis = np.linspace(0.0, min(p, D), grid + 1)
    p10_axis = np.linspace(0.0, min(1.0 - p, D), grid + 1)
    best = math.inf
    for p01 in p01_axis:
        p10 = p10_axis[p10_axis <= D - p01]
        if p10.size == 0:
            continue
        t = p - p01 + p10
        t = t[(t > 0.0) & (t < 1.0)]
        if t.size == 0:
            continue
        # Output score in log domain, elementwise over the row.
        left = np.log(t) + (1.0 - t) / t
        right = np.log1p(-t) + t / (1.0 - t)
        row_min = float(np.logaddexp(left, right).min())
        if row_min < best:
            best = row_min
    return _two_term_score(p) - best


def dmim(p: float, delta: float) -> float:
    """Inverse of :func:`rmim` in D, for p < 0.5.

    Returns the distortion level at which the loss reaches ``delta``,
    by bisection on [0, 0.5 - p]; ``delta`` past the plateau value has
    no preimage and raises.
    """
    if not 0.0 < p < 0.5:
        raise ValueError(f"source parameter must be in (0, 0.5), got {p!r}")
    cap = delta_plateau(p)
    if not 0.0 <= delta <= cap:
        raise ValueError(f"loss target {delta!r} outside [0, {cap}]")
    if delta == 0.0:
        return 0.0
    if delta == cap:
        return 0.5 - p
    return bisect_root(lambda D: rmim(p, D) - delta, 0.0, 0.5 - p, tol=1e-10)


def binary_entropy(p: float) -> float:
    """H(p) = -p log2 p - (1-p) log2(1-p) in bits, with H(0) = H(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def inv_binary_entropy(h: float) -> float:
    """The p in [0, 0.5] with H(p) = h, by bisection to 1e-12."""
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"entropy must be in [0, 1] bits, got {h!r}")
    if h == 0.0:
        return 0.0
    return bisect_root(lambda x: binary_entropy(x) - h, 0.0, 0.5, tol=1e-12)


def distortion_curve(p: float, distortions: Sequence[float]) -> DistortionCurve:
    """Sample the loss-distortion curve at the given distortion levels."""
    pts = tuple((float(D), rmim(p, float(D))) for D in distortions)
    return DistortionCurve(p=p, points=pts, delta_p=delta_plateau(p))


def plan_max_transmission(delta: float, capacity: float, time: float = 1.0) -> TransmissionPlan:
    """Best received entropy under a loss allowance and a C*t budget.

    Parameters
    ----------
    delta : float
        Importance-loss allowance in nats, >= 0.
    capacity : float
        Channel capacity in bits per use.
    time : float
        Channel uses; C*t must land in (0, 1].

    Returns
    -------
    TransmissionPlan
        With delta = 0 the budget alone binds: max entropy C*t. For
        0 < delta <= delta_plateau(p0) the allowance converts into
        extra distortion headroom D and the entropy grows to
        H(p0 + D). Past the plateau the allowance stops binding and a
        full bit comes through.
    """
    if delta < 0.0:
        raise ValueError(f"loss allowance must be >= 0, got {delta!r}")
    budget = capacity * time
    if not 0.0 < budget <= 1.0:
        raise ValueError(f"C*t must be in (0, 1], got {budget!r}")
    p0 = inv_binary_entropy(budget)
    plateau = delta_plateau(p0)
    if delta == 0.0:
        regime, max_h = PlanRegime.EXACT, budget
    elif delta <= plateau:
        regime = PlanRegime.GROWTH
        max_h = binary_entropy(p0 + dmim(p0, delta))
    else:
        regime, max_h = PlanRegime.SATURATION, 1.0
    return TransmissionPlan(
        delta_max=delta,
        capacity=capacity,
        time=time,
        p0=p0,
        regime=regime,
        max_entropy=max_h,
    )
