"""Source generators: frozen densities, normalization, remainder bins.

Frozen references computed independently with 60-digit arithmetic.
"""
from __future__ import annotations

import math

import pytest

from nmim.sources import (
    SourceKind,
    SourceSpec,
    normal_discrete_source,
    rayleigh_discrete_source,
    uniform_source,
    zipf_source,
)


class TestUniform:
    def test_equal_masses(self):
        d = uniform_source(4)
        assert d.probs == (0.25, 0.25, 0.25, 0.25)

    def test_large_alphabet_normalizes(self):
        d = uniform_source(10**6)
        assert d.n == 10**6
        assert sum(d.probs) == pytest.approx(1.0, abs=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            uniform_source(0)


class TestZipf:
    def test_frozen_densities(self):
        d = zipf_source(5)
        assert d.probs[0] == pytest.approx(0.44060576031521907, rel=1e-14)
        assert d.probs[4] == pytest.approx(0.086714248818903922, rel=1e-14)

    def test_matches_power_law(self):
        d = zipf_source(12, exponent=1.5)
        weights = [k ** -1.5 for k in range(1, 13)]
        total = sum(weights)
        for p, w in zip(d.probs, weights):
            assert p == pytest.approx(w / total, rel=1e-13)

    def test_strictly_decreasing(self):
        d = zipf_source(20)
        assert all(a > b for a, b in zip(d.probs, d.probs[1:]))

    def test_minimum_is_last(self):
        d = zipf_source(15)
        assert min(d.probs) == d.probs[-1]


class TestNormalDiscrete:
    def test_frozen_densities(self):
        d = normal_discrete_source(10)
        assert d.probs[0] == pytest.approx(0.054435918323327185, rel=1e-13)
        assert d.probs[8] == pytest.approx(0.058969726336670652, rel=1e-13)
        # the final event absorbs the off-grid mass
        assert d.probs[9] == pytest.approx(0.15321235108986551, rel=1e-13)

    def test_density_formula(self):
        n = 8
        d = normal_discrete_source(n)
        mu, var = 0.51 * n, float(n)
        for k in range(1, n):
            expected = math.exp(-((k - mu) ** 2) / (2 * var)) / math.sqrt(
                2 * math.pi * var)
            assert d.probs[k - 1] == pytest.approx(expected, rel=1e-13)

    def test_normalized(self):
        for n in range(2, 30):
            assert sum(normal_discrete_source(n).probs) == pytest.approx(
                1.0, abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            normal_discrete_source(1)


class TestRayleighDiscrete:
    def test_frozen_densities(self):
        d = rayleigh_discrete_source(10)
        assert d.probs[0] == pytest.approx(0.060577077154771505, rel=1e-13)
        assert d.probs[8] == pytest.approx(0.044752223654003071, rel=1e-13)
        assert d.probs[9] == pytest.approx(0.064092243147661124, rel=1e-13)

    def test_density_formula(self):
        n = 12
        d = rayleigh_discrete_source(n)
        b = n / 2.5
        for k in range(1, n):
            expected = k / b**2 * math.exp(-(k**2) / (2 * b**2))
            assert d.probs[k - 1] == pytest.approx(expected, rel=1e-13)

    def test_normalized(self):
        for n in range(2, 30):
            assert sum(rayleigh_discrete_source(n).probs) == pytest.approx(
                1.0, abs=1e-12)


class TestSourceSpec:
    def test_dispatch(self):
        assert SourceSpec(kind=SourceKind.UNIFORM, n=3).make().probs == (
            uniform_source(3).probs)
        assert SourceSpec(kind=SourceKind.ZIPF, n=5).make().probs == (
            zipf_source(5).probs)
        assert SourceSpec(kind=SourceKind.NORMAL_DISCRETE, n=6).make().probs == (
            normal_discrete_source(6).probs)
        assert SourceSpec(kind=SourceKind.RAYLEIGH_DISCRETE, n=6).make().probs == (
            rayleigh_discrete_source(6).probs)

    def test_explicit_passthrough(self):
        spec = SourceSpec(kind=SourceKind.EXPLICIT, probs=(0.25, 0.75))
        assert spec.make().probs == (0.25, 0.75)

    def test_zipf_exponent_forwarded(self):
        spec = SourceSpec(kind=SourceKind.ZIPF, n=7, zipf_exponent=2.0)
        assert spec.make().probs == zipf_source(7, exponent=2.0).probs

    def test_kind_values_are_cli_names(self):
        assert SourceKind.NORMAL_DISCRETE.value == "normal-discrete"
        assert SourceKind.RAYLEIGH_DISCRETE.value == "rayleigh-discrete"

    def test_explicit_requires_probs(self):
        with pytest.raises(ValueError):
            SourceSpec(kind=SourceKind.EXPLICIT).make()
