"""Dominance analysis: gap reports, threshold intervals, event surgery.

Frozen references computed independently with 60-digit arithmetic.
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from nmim.analysis import (
    ThresholdRegime,
    dominance_thresholds,
    dominance_thresholds_exact,
    merge_events,
    min_gap,
    split_event,
)
from nmim.measure import Distribution, log_event_importance, nmim

LN2 = math.log(2.0)


class TestMinGap:
    def test_frozen_values(self):
        report = min_gap(Distribution([0.9, 0.1]))
        assert report.gap == pytest.approx(0.0012404456131574047, rel=1e-10)
        assert report.p_min == 0.1
        assert report.p_smin == 0.9

        report = min_gap(Distribution([0.2, 0.3, 0.5]))
        assert report.gap == pytest.approx(0.34201475926591025, rel=1e-12)

    def test_gap_is_total_minus_rarest(self):
        d = Distribution([0.010, 0.215, 0.037, 0.292, 0.446])
        report = min_gap(d)
        assert report.nmim_total.log_value == nmim(d).log_value
        assert report.l_pmin.log_value == log_event_importance(0.010).log_value
        # the rarest event exceeds the rest by ~e^70, so the log gap
        # underflows to exactly zero
        assert report.gap == 0.0

    def test_gap_nonnegative_always(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            n = int(rng.integers(2, 30))
            probs = rng.dirichlet(np.ones(n))
            probs = np.clip(probs, 1e-9, None)
            probs /= probs.sum()
            if len(set(probs)) < n:
                continue
            assert min_gap(Distribution(probs)).gap >= 0.0

    def test_gap_below_ln2_when_minimum_is_small(self):
        # condition i: p_min <= 0.1 / (1 + ln(n - 1))
        rng = np.random.default_rng(37)
        for _ in range(100):
            n = int(rng.integers(3, 25))
            rest = rng.dirichlet(np.ones(n - 1))
            p_min = 0.05 / (1.0 + math.log(n - 1))
            probs = np.concatenate([[p_min], rest * (1.0 - p_min)])
            report = min_gap(Distribution(probs))
            assert report.condition_i
            assert 0.0 <= report.gap <= LN2 + 1e-12

    def test_gap_below_ln2_for_large_alphabets(self):
        # condition ii: n >= 100; spread-out masses, unique minimum
        rng = np.random.default_rng(41)
        for n in (100, 150, 256):
            weights = rng.uniform(0.5, 2.0, size=n)
            probs = weights / weights.sum()
            report = min_gap(Distribution(probs))
            assert report.condition_ii
            assert 0.0 <= report.gap <= LN2 + 1e-12

    def test_condition_flags(self):
        report = min_gap(Distribution([0.9, 0.1]))
        # n=2: threshold is 0.1/(1 + ln 1) = 0.1, met with equality
        assert report.condition_i
        assert not report.condition_ii

        report = min_gap(Distribution([0.4, 0.6]))
        assert not report.condition_i

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            min_gap(Distribution([1.0]))
        with pytest.raises(ValueError, match="unique"):
            min_gap(Distribution([0.25, 0.25, 0.5]))


class TestDominanceThresholds:
    def test_closed_forms(self):
        report = dominance_thresholds(100)
        assert report.regime is ThresholdRegime.LARGE_N
        assert report.x1 == pytest.approx(math.exp(math.log(99.0) - 100.0), rel=1e-15)
        assert report.x2 == pytest.approx(1.0 - math.log(99.0) / 99.0, rel=1e-15)

        report = dominance_thresholds(50, p1=0.002)
        assert report.regime is ThresholdRegime.SMALL_PMIN
        assert report.x1 == pytest.approx(math.exp(math.log(49.0) - 500.0), rel=1e-15)
        assert report.x2 == pytest.approx(
            1.0 - 0.002 / 0.998 * math.log(49.0), rel=1e-15)

    def test_exact_roots_frozen(self):
        report = dominance_thresholds_exact(100)
        assert report.x1 == pytest.approx(3.6828752162606276e-42, rel=1e-10)
        assert report.x2 == pytest.approx(0.95357341285996076, rel=1e-12)

        report = dominance_thresholds_exact(50, p1=0.002)
        assert report.x1 == pytest.approx(3.4910424393032299e-216, rel=1e-9)
        assert report.x2 == pytest.approx(0.99220069965586003, rel=1e-12)

    def test_exact_roots_satisfy_equation(self):
        for n, p1 in ((10, None), (100, None), (40, 0.004), (100, 0.005)):
            c = float(n) if p1 is None else 1.0 / p1
            report = dominance_thresholds_exact(n, p1=p1)
            for x in (report.x1, report.x2):
                if x < 1e-300:
                    continue
                residual = math.log(x) + c * (1.0 - x) - math.log(n - 1)
                assert abs(residual) < 1e-9

    def test_closed_interval_contains_exact_interval(self):
        # the closed upper endpoint overshoots the true boundary and the
        # overshoot shrinks as n grows; at the lower endpoint the exact
        # root exceeds the closed form only by a factor 1 + O(c x1),
        # which is far below float resolution, so the two must agree
        gaps = []
        for n in (20, 100, 500):
            closed = dominance_thresholds(n)
            exact = dominance_thresholds_exact(n)
            assert closed.x1 == pytest.approx(exact.x1, rel=1e-10)
            assert closed.x2 >= exact.x2
            gaps.append(closed.x2 - exact.x2)
        assert gaps[0] > gaps[1] > gaps[2] > 0.0

    def test_dominance_holds_inside_interval(self):
        # for x = p1/p2 in [x1, x2], L(p1) - L(p2) >= ln(n - 1); the
        # physically meaningful range starts at x = p1 (where p2 = 1)
        n, p1 = 100, 0.005
        report = dominance_thresholds_exact(n, p1=p1)
        assert report.x2 == pytest.approx(0.97690758463748792, rel=1e-12)
        target = math.log(n - 1)
        for x in np.geomspace(p1, report.x2 * (1.0 - 1e-12), 60):
            p2 = p1 / x
            margin = (log_event_importance(p1).log_value
                      - log_event_importance(p2).log_value)
            assert margin >= target - 1e-9

    def test_dominance_fails_just_outside(self):
        n, p1 = 100, 0.005
        report = dominance_thresholds_exact(n, p1=p1)
        x = min(report.x2 * 1.001, 0.9999)
        margin = (log_event_importance(p1).log_value
                  - log_event_importance(p1 / x).log_value)
        assert margin < math.log(n - 1)

    def test_validation(self):
        with pytest.raises(ValueError):
            dominance_thresholds(1)
        with pytest.raises(ValueError):
            dominance_thresholds(10, p1=0.2)  # not below 1/n
        with pytest.raises(ValueError):
            dominance_thresholds_exact(10, p1=-0.01)


class TestEventSurgery:
    def test_split_inserts_in_place(self):
        d = Distribution([0.2, 0.5, 0.3])
        out = split_event(d, 1, 0.4)
        assert out.probs == pytest.approx((0.2, 0.2, 0.3, 0.3))

    def test_merge_keeps_earlier_position(self):
        d = Distribution([0.2, 0.5, 0.3])
        out = merge_events(d, 2, 0)
        assert out.probs == pytest.approx((0.5, 0.5))

    def test_split_then_merge_roundtrip(self):
        d = Distribution([0.25, 0.75])
        there = split_event(d, 0, 0.2)
        back = merge_events(there, 0, 1)
        assert back.probs == pytest.approx(d.probs)

    def test_split_raises_score_merge_lowers_it(self):
        rng = np.random.default_rng(43)
        for _ in range(60):
            n = int(rng.integers(2, 10))
            probs = rng.dirichlet(np.ones(n))
            probs = np.clip(probs, 1e-6, None)
            probs /= probs.sum()
            d = Distribution(probs)
            base = nmim(d).log_value
            idx = int(rng.integers(0, n))
            frac = float(rng.uniform(0.05, 0.95))
            assert nmim(split_event(d, idx, frac)).log_value >= base - 1e-12
            i, j = rng.choice(n, size=2, replace=False)
            assert nmim(merge_events(d, int(i), int(j))).log_value <= base + 1e-12

    def test_validation(self):
        d = Distribution([0.5, 0.5])
        with pytest.raises(IndexError):
            split_event(d, 2, 0.5)
        with pytest.raises(ValueError):
            split_event(d, 0, 1.0)
        with pytest.raises(IndexError):
            merge_events(d, 0, 5)
        with pytest.raises(ValueError):
            merge_events(d, 1, 1)
