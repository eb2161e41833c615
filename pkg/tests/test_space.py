import numpy as np
import pytest

from apkit.errors import UsageError
from apkit.gauges import Gauge, MeasureNormGauge, SupGauge
from apkit.group import FineLattice, FiniteCyclic, LatticeWindow, window_coords
from apkit.points import PointMeasure, PointSet, SampledFunction
from apkit.space import (DISCRETE, EXACT_INVARIANT, FAIL, Entourage, Instance, act,
                         check_invariance, equicontinuity_check, gauge, gauge_axiom_violations,
                         orbit_samples)

from conftest import alternating, cyclic_function


def test_act_identity_and_composition():
    inst, spec, x = alternating()
    G = inst.group
    assert act(inst, G.zero, x).same_representation(x)
    for s in range(-3, 4):
        for t in range(-3, 4):
            a = act(inst, s, act(inst, t, x))
            b = act(inst, s + t, x)
            assert a.same_representation(b)


def test_act_cyclic_exact_law():
    inst, spec, x = cyclic_function([0, 1, 2, 3, 4])
    for s in range(5):
        for t in range(5):
            assert act(inst, s, act(inst, t, x)).same_representation(act(inst, (s + t) % 5, x))


def test_act_dirac():
    G = LatticeWindow(1, 5)
    d0 = PointMeasure.from_support(G, [0], [1])
    inst = Instance(G, [MeasureNormGauge(G, window=5)], "PointMeasure")
    moved = act(inst, 1, d0)
    assert moved.at(np.arange(-5, 6)).tolist() == [0] * 6 + [1] + [0] * 4


def test_act_set_translation():
    G = LatticeWindow(1, 10)
    lam = PointSet.from_predicate(G, lambda c: c[..., 0] % 2 == 0)
    moved = lam.translate(3)
    c = window_coords(G)
    expected = [v for v in range(-10, 11) if (v - 3) % 2 == 0]
    assert moved.elements_in(c)[:, 0].tolist() == expected
    assert all(v % 2 == 1 for v in expected)


def test_orbit_samples_cyclic_and_fixed():
    inst, spec, x = cyclic_function([1, 2, 3, 4])
    assert len(orbit_samples(inst, x)) == 4
    inst, spec, c = cyclic_function([7.0] * 5)
    for _, y in orbit_samples(inst, c):
        assert gauge(inst, spec, y, c) == 0


def test_orbit_samples_alternating_two_classes():
    inst, spec, x = alternating(W=3)
    samples = [y for _, y in orbit_samples(inst, x, 3)]
    assert len(samples) == 7
    reps = []
    for y in samples:
        if not any(gauge(inst, spec, y, r) == 0 for r in reps):
            reps.append(y)
    assert len(reps) == 2


def test_gauge_kind_mismatch():
    inst, spec, x = alternating()
    G = inst.group
    with pytest.raises(UsageError):
        gauge(inst, spec, x, PointMeasure.from_support(G, [0], [1]))


def test_entourage():
    inst, spec, x = alternating()
    U = Entourage(spec, 0.5)
    assert U.contains(x, x.translate(2))
    assert not U.contains(x, x.translate(1))
    with pytest.raises(UsageError):
        Entourage(spec, 0)


def test_sup_gauge_exact_invariant_on_cyclic():
    inst, spec, x = cyclic_function([0.3, -1.0, 2.0, 0.5, 0.0, 1.0])
    samples = [x, x.translate(1), SampledFunction.from_values(inst.group, np.arange(6.0))]
    cert = check_invariance(inst, spec, [0.5, 1.0], samples)
    assert cert.verdict == EXACT_INVARIANT


def test_norm_gauge_exact_invariant_on_cyclic():
    G = FiniteCyclic(8)
    spec = MeasureNormGauge(G, K=3)
    inst = Instance(G, [spec], "PointMeasure")
    pts = [PointMeasure.from_weights(G, np.array(w)) for w in
           ([1, 0, 2, 0, 0, 3, 0, 1], [0, 0, 0, 1, 1, 0, 0, 0], [2, 2, 2, 2, 2, 2, 2, 2])]
    cert = check_invariance(inst, spec, [1, 2], pts)
    assert cert.verdict == EXACT_INVARIANT and cert.defect == 0


class WeightedGauge(Gauge):
    """gauge(x, y) * w(x): deliberately not translation invariant."""

    name = "weighted"
    point_type = SampledFunction

    def __init__(self, group):
        super().__init__(group)
        self._sites = np.arange(group.n, dtype=np.int64).reshape(-1, 1)

    def sites(self):
        return self._sites

    def distance(self, fa, fb):
        base = np.abs(fa - fb).max(axis=-1)[..., 0] if fa.ndim > 1 else np.abs(fa - fb).max()
        w = 1.0 + np.maximum(fa[..., 0, 0], fb[..., 0, 0]) ** 2 if fa.ndim > 2 else 1.0 + max(fa[0, 0], fb[0, 0]) ** 2
        return base * w


def test_weighted_gauge_not_invariant():
    G = FiniteCyclic(4)
    spec = WeightedGauge(G)
    inst = Instance(G, [spec], "SampledFunction")
    x = SampledFunction.from_values(G, [0.0, 1.0, 2.0, 3.0])
    y = SampledFunction.from_values(G, [0.0, 1.0, 2.0, 4.0])
    cert = check_invariance(inst, spec, [0.5], [x, y])
    assert cert.verdict != EXACT_INVARIANT
    v = cert.violation
    assert v is not None
    px, py = [x, y][v["x"]], [x, y][v["y"]]
    t = v["t"]
    assert abs(spec(px.translate(t), py.translate(t)) - spec(px, py)) == pytest.approx(cert.defect)


def test_equicontinuity_fine_lattice_smooth():
    G = FineLattice("0.01", 2)
    spec = SupGauge(G, window=2)
    inst = Instance(G, [spec], "SampledFunction")
    x = SampledFunction.from_formula(G, lambda c: np.sin(c[..., 0] * 0.01))
    cert = equicontinuity_check(inst, spec, [0.1, 0.05], [x])
    assert cert.passed
    # |sin(a) - sin(b)| <= |a - b| gives r(eps) >= eps - h
    for eps, r in zip(cert.eps_grid, cert.radii):
        assert r > 0 and r >= eps - 0.01 - 1e-12


def test_equicontinuity_fails_for_measures():
    G = FineLattice("0.1", 1)
    spec = MeasureNormGauge(G, K=2, window=1)
    inst = Instance(G, [spec], "PointMeasure")
    mu = PointMeasure.from_support(G, [0, 4], [3, 2])
    cert = equicontinuity_check(inst, spec, [1.0], [mu])
    assert cert.verdicts == [FAIL]
    # a two-cell K holds an atom and its one-step shift: |mu - T_s mu|(K) >= 2 * min weight
    assert cert.witnesses[0]["gauge"] >= 2 * 2


def test_equicontinuity_discrete():
    inst, spec, x = alternating()
    cert = equicontinuity_check(inst, spec, [0.5], [x])
    assert cert.verdicts == [DISCRETE] and cert.passed


def test_equicontinuity_on_orbit_samples():
    """On the orbit of a uniformly continuous sample the same moduli work."""
    G = FineLattice("0.02", 2)
    spec = SupGauge(G, window=2)
    inst = Instance(G, [spec], "SampledFunction")
    x = SampledFunction.from_formula(G, lambda c: np.cos(c[..., 0] * 0.02 * 3.0))
    eps = [0.3, 0.1]
    base = equicontinuity_check(inst, spec, eps, [x])
    orbit = [y for _, y in orbit_samples(inst, x, 1)]
    cert = equicontinuity_check(inst, spec, eps, orbit)
    assert base.passed and cert.passed
    assert cert.radii == base.radii


def test_axioms_detect_broken_gauge():
    class Bad(MeasureNormGauge):
        def raw_distance(self, fa, fb):
            return np.abs(fa - fb).sum(axis=-1) + (fa[..., 0] > fb[..., 0])

    G = FiniteCyclic(3)
    spec = Bad(G)
    feats = np.array([[0, 0, 0], [1, 0, 0], [0, 0, 5]])
    out = gauge_axiom_violations(spec, feats, [[0, 1, 2], [1, 0, 2]], exact=True)
    assert {v["axiom"] for v in out} >= {"symmetry"}
    assert gauge_axiom_violations(MeasureNormGauge(G), feats, [[0, 1, 2]], exact=True) == []
