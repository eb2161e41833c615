"""Gauge values against hand computations and brute-force recomputation."""
from fractions import Fraction

import numpy as np
import pytest

from apkit.errors import UsageError
from apkit.gauges import (AutocorrelationGauge, MeasureNormGauge, ProductGauge, StepanovGauge,
                          SupGauge, VagueGauge, make_gauge)
from apkit.group import FineLattice, FiniteCyclic, LatticeWindow
from apkit.instances import counterexample_measure
from apkit.points import PointMeasure, PointSet, SampledFunction
from apkit.testfns import Hat, Indicator

from conftest import alternating


def zero_measure(G):
    return PointMeasure.from_support(G, [], [])


# -- sup -------------------------------------------------------------------

def test_sup_reflexive():
    _, spec, x = alternating()
    assert spec(x, x) == 0


def test_sup_alternating_vs_shift():
    _, spec, x = alternating(W=20)
    assert spec(x, x.translate(1)) == 2.0
    brute = max(abs((-1) ** n - (-1) ** (n - 1)) for n in range(-20, 21))
    assert spec(x, x.translate(1)) == brute


def test_sup_circle_codomain_constant_angle():
    G = LatticeWindow(1, 10)
    theta = 0.7
    base = np.linspace(0, 6, 41) % (2 * np.pi)
    f = SampledFunction.from_values(G, base, lo=-20)
    g = SampledFunction.from_values(G, (base + theta) % (2 * np.pi), lo=-20)
    spec = SupGauge(G, window=10, codomain="circle")
    assert spec(f, g) == pytest.approx(theta, abs=1e-12)


# -- Stepanov --------------------------------------------------------------

def test_stepanov_constant_difference():
    G = LatticeWindow(1, 10)
    f = SampledFunction.from_formula(G, lambda c: np.sin(c[..., 0] * 0.3))
    g = SampledFunction.from_formula(G, lambda c: np.sin(c[..., 0] * 0.3) - 0.75)
    for p in (1, 2, 3):
        assert StepanovGauge(G, K=3, p=p, window=10)(f, g) == pytest.approx(0.75)


def test_stepanov_single_spike():
    G = LatticeWindow(1, 10)
    spike = SampledFunction.from_formula(G, lambda c: (c[..., 0] == 0).astype(float))
    zero = SampledFunction.from_formula(G, lambda c: np.zeros(c.shape[:-1]))
    assert StepanovGauge(G, K=2, p=1, window=10)(spike, zero) == pytest.approx(0.5)


def test_stepanov_below_sup(rng):
    G = LatticeWindow(1, 30)
    sup = SupGauge(G, window=30)
    st = StepanovGauge(G, K=5, p=2, window=30)
    for _ in range(100):
        f = SampledFunction.from_values(G, rng.normal(size=81), lo=-40)
        g = SampledFunction.from_values(G, rng.normal(size=81), lo=-40)
        assert st(f, g) <= sup(f, g) + 1e-12


def test_stepanov_bad_parameters():
    G = LatticeWindow(1, 3)
    with pytest.raises(UsageError):
        StepanovGauge(G, K=0)
    with pytest.raises(UsageError):
        StepanovGauge(G, K=2, p=0.5)
    with pytest.raises(UsageError):
        StepanovGauge(G, K=50, window=3)


# -- autocorrelation -------------------------------------------------------

def even_odd(G, shift):
    return PointSet.from_predicate(G, lambda c: (c[..., 0] - shift) % 2 == 0)


def test_autocorrelation_identical():
    G = LatticeWindow(1, 50)
    spec = AutocorrelationGauge(G, n=[50])
    assert spec(even_odd(G, 0), even_odd(G, 0)) == 0


def test_autocorrelation_complementary():
    G = LatticeWindow(1, 50)
    spec = AutocorrelationGauge(G, n=[10, 50])
    assert spec(even_odd(G, 0), even_odd(G, 1)) == 1
    assert spec.exact_value(even_odd(G, 0), even_odd(G, 1)) == 1


def test_autocorrelation_single_point_difference():
    G = LatticeWindow(1, 50)
    spec = AutocorrelationGauge(G, n=[50])
    a = even_odd(G, 0)
    b = PointSet.from_predicate(G, lambda c: (c[..., 0] % 2 == 0) | (c[..., 0] == 1))
    v = spec.exact_value(a, b)
    assert v == Fraction(1, 101)
    assert v <= Fraction(1, 100)
    assert spec.sequence(a, b) == [(50, Fraction(1, 101))]


# -- measure norm ----------------------------------------------------------

def test_norm_of_dirac():
    G = LatticeWindow(1, 5)
    spec = MeasureNormGauge(G, K=1, window=5)
    assert spec.exact_value(PointMeasure.from_support(G, [0], [1]), zero_measure(G)) == 1


@pytest.mark.parametrize("w,c", [(1, 1), (3, 2), (2, 5)])
def test_norm_of_integer_comb(w, c):
    G = LatticeWindow(1, 20)
    comb = PointMeasure.from_formula(G, lambda s: np.full(s.shape[:-1], w, dtype=np.int64))
    spec = MeasureNormGauge(G, K=c, window=20)
    assert spec.exact_value(comb, zero_measure(G)) == w * c


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_norm_of_counterexample_truncation(N):
    G = LatticeWindow(1, 2 * 5 ** N)
    mu = counterexample_measure(N, group=G)
    spec = MeasureNormGauge(G, K=1, window=2 * 5 ** N)
    assert spec.exact_value(mu, zero_measure(G)) == N


# -- vague -----------------------------------------------------------------

def test_vague_identical():
    G = LatticeWindow(1, 10)
    mu = PointMeasure.from_support(G, [0, 3], [1, 2])
    assert VagueGauge(G, [Hat(0, 2)])(mu, mu) == 0


def test_vague_counterexample_period_five():
    G = LatticeWindow(1, 10)
    mu = counterexample_measure(4, group=G)
    spec = VagueGauge(G, [Hat(0, 5), Hat(1, 3), Indicator(-4, 5)])
    assert spec.exact_value(mu.translate(5), mu) == 0


def test_vague_dirac_pair():
    G = LatticeWindow(1, 10)
    spec = VagueGauge(G, [Hat(0, 2)])
    d0 = PointMeasure.from_support(G, [0], [1])
    d1 = PointMeasure.from_support(G, [1], [1])
    assert spec.exact_value(d0, d1) == Fraction(1, 2)
    assert Fraction(1, 2) == abs(Hat(0, 2).value(0) - Hat(0, 2).value(1))


def test_vague_fine_lattice_values():
    G = FineLattice("0.1", 2)
    spec = VagueGauge(G, [Hat(0, "0.5")])
    d0 = PointMeasure.from_support(G, [0], [1])
    d3 = PointMeasure.from_support(G, [3], [1])
    # hat(0) - hat(0.3) = 1 - 0.4
    assert spec.exact_value(d0, d3) == Fraction(3, 5)


# -- product ---------------------------------------------------------------

def test_product_identical():
    G = FineLattice("0.1", 2)
    mu = PointMeasure.from_support(G, [0, 7], [1, 1])
    assert ProductGauge(G, [Hat(0, "0.5")], window=2)(mu, mu) == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_product_dirac_lipschitz(k):
    G = FineLattice("0.1", 2)
    phi = Hat(0, "0.5")
    spec = ProductGauge(G, [phi], window=2)
    d0 = PointMeasure.from_support(G, [0], [1])
    dt = PointMeasure.from_support(G, [k], [1])
    assert spec.exact_value(d0, dt) <= phi.lipschitz * Fraction(k, 10)


def test_product_comb_shifted_by_period():
    G = FineLattice("0.1", 3)
    comb = PointMeasure.from_formula(G, lambda c: (c[..., 0] % 10 == 0).astype(np.int64))
    spec = ProductGauge(G, [Hat(0, "0.5"), Hat("0.2", 1)], window=3)
    assert spec.exact_value(comb.translate(10), comb) == 0
    assert spec.exact_value(comb.translate(3), comb) > 0


def test_product_matches_brute_force(rng):
    G = LatticeWindow(1, 6)
    phi = Hat(1, 3)
    spec = ProductGauge(G, [phi], window=6)
    sup_a = rng.integers(-10, 10, size=5)
    sup_b = rng.integers(-10, 10, size=5)
    a = PointMeasure.from_support(G, sup_a, rng.integers(1, 4, size=5))
    b = PointMeasure.from_support(G, sup_b, rng.integers(1, 4, size=5))
    def conv(m, y):
        return sum(Fraction(int(m.at([s]).item())) * phi.value(y - s) for s in range(-20, 21))
    brute = max(abs(conv(a, y) - conv(b, y)) for y in range(-6, 7))
    assert spec.exact_value(a, b) == brute


# -- registry --------------------------------------------------------------

def test_make_gauge_registry():
    G = LatticeWindow(1, 10)
    assert make_gauge(G, {"name": "sup", "window": 5}).name == "sup"
    with pytest.raises(UsageError):
        make_gauge(G, {"name": "nope"})
    with pytest.raises(UsageError):
        make_gauge(G, {"name": "sup", "bogus": 1})


def test_sup_gauge_on_cyclic_is_full_group():
    G = FiniteCyclic(6)
    x = SampledFunction.from_values(G, [0, 1, 2, 3, 4, 5.0])
    assert SupGauge(G)(x, x.translate(1)) == 5.0
