from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import Bounds, LinearConstraint, milp

from apkit.detectors import (AlmostPeriodReport, almost_periods, center_out_order, classify,
                             default_eps_grid, density_cover_bridge, greedy_eps_net,
                             min_cover_cyclic, mixed_containment, net_cover_bridge, profile,
                             relative_density, reports_csv)
from apkit.errors import UsageError
from apkit.gauges import SupGauge
from apkit.group import FineLattice, LatticeWindow
from apkit.instances import GOLDEN, counterexample_instance, counterexample_measure, make_trig_function
from apkit.oracle import exhaustive_min_cover, fixture_instance, oracle_classify, random_fixture
from apkit.points import SampledFunction
from apkit.space import FAIL, INCONCLUSIVE, PASS, WINDOWED, Instance

from conftest import alternating, cyclic_function


def golden_cos(W=200, window=200):
    G = LatticeWindow(1, W)
    spec = SupGauge(G, window=window)
    x = make_trig_function([GOLDEN], [1.0], G)
    return Instance(G, [spec], "SampledFunction", complete=True), spec, x


# -- almost periods --------------------------------------------------------

def test_alternating_periods():
    inst, spec, x = alternating(W=10)
    rep = almost_periods(inst, spec, x, 0.5, W=10)
    assert rep.period_list == list(range(-10, 11, 2))
    assert rep.max_gap == 2
    assert rep.flags == [WINDOWED]


def test_large_eps_gives_whole_window():
    inst, spec, x = alternating(W=10)
    rep = almost_periods(inst, spec, x, 2.5, W=10)
    assert rep.period_list == list(range(-10, 11))


def test_counterexample_periods_contain_progression():
    G = LatticeWindow(1, 300)
    inst = counterexample_instance(G, radii=(5,))
    mu = counterexample_measure(20, group=G)
    for eps in (Fraction(1, 3), Fraction(1, 100)):
        rep = almost_periods(inst, "vague", mu, eps, W=300, with_cover=False)
        got = set(rep.period_list)
        assert {m for m in range(-300, 301) if m % 25 == 5} <= got


def test_report_invariants(rng):
    inst, spec, x = golden_cos(W=150, window=40)
    for eps in (0.2, 0.6, 1.2):
        rep = almost_periods(inst, spec, x, eps, W=150, with_cover=False)
        P = rep.period_list
        assert 0 in P
        assert set(P) == {-t for t in P}
        assert P == sorted(P)


def test_single_period_sentinel():
    G = LatticeWindow(1, 10)
    rep = AlmostPeriodReport.from_periods(G, [0], W=10)
    assert rep.max_gap == 21


# -- relative density ------------------------------------------------------

def test_relative_density_even_integers():
    G = LatticeWindow(1, 10)
    rep = AlmostPeriodReport.from_periods(G, list(range(-10, 11, 2)), W=10)
    v = relative_density(rep, R=1)
    assert v.verdict == PASS and v.R_min == 1


def test_relative_density_single_point_fails():
    G = LatticeWindow(1, 10)
    rep = AlmostPeriodReport.from_periods(G, [0], W=10)
    assert all(relative_density(rep, R=R).verdict == FAIL for R in range(10))


def test_relative_density_progression():
    G = LatticeWindow(1, 300)
    rep = AlmostPeriodReport.from_periods(G, [m for m in range(-300, 301) if m % 25 == 5], W=300)
    v = relative_density(rep, R=13)
    assert v.verdict == PASS and v.R_min == 13
    assert relative_density(rep, R=12).verdict == FAIL


def test_relative_density_rejects_large_R():
    G = LatticeWindow(1, 10)
    rep = AlmostPeriodReport.from_periods(G, [0], W=10)
    with pytest.raises(UsageError):
        relative_density(rep, R=11)


def test_relative_density_two_dimensional():
    G = LatticeWindow(2, 12)
    P = [(a, b) for a in range(-12, 13, 3) for b in range(-12, 13, 4)]
    rep = AlmostPeriodReport.from_periods(G, P, W=12)
    v = relative_density(rep, R=3)
    # sup-metric covering radius of 3Z x 4Z is max(1, 2) = 2
    assert v.verdict == PASS and v.R_min == 2


# -- finite relative density ----------------------------------------------

def test_min_cover_examples():
    assert min_cover_cyclic(6, [0, 2, 4]) == [0, 1]
    assert min_cover_cyclic(6, list(range(6))) == [0]
    assert len(min_cover_cyclic(6, [0])) == 6


def test_min_cover_against_exhaustive(rng):
    for _ in range(40):
        n = int(rng.integers(2, 30))
        k = int(rng.integers(1, min(n, 6) + 1))
        P = sorted(set(rng.choice(n, size=k, replace=False).tolist()) | {0})
        F = min_cover_cyclic(n, P)
        assert len({(p + f) % n for p in P for f in F}) == n
        assert len(F) == len(exhaustive_min_cover(n, P))


def test_finite_relative_density_cyclic():
    inst, spec, x = cyclic_function([1, -1] * 3)
    rep = almost_periods(inst, spec, x, 0.5)
    assert rep.period_list == [0, 2, 4]
    assert rep.fin_rel_dense.verdict == PASS and rep.fin_rel_dense.F == [0, 1]


# -- eps-nets ------------------------------------------------------------

def test_net_alternating_two_centers():
    inst, spec, x = alternating(W=10)
    net = greedy_eps_net(inst, spec, x, 1, W=10)
    assert net.size == 2 and net.covered


def test_net_large_eps_single_center():
    inst, spec, x = alternating(W=10)
    net = greedy_eps_net(inst, spec, x, 2.01, W=10)
    assert net.size == 1 and net.centers == [0]


def _min_cover_size(D, eps):
    """Minimum number of sample points whose open eps-balls cover all samples (MILP)."""
    A = (D < eps).astype(float)
    n = A.shape[0]
    res = milp(np.ones(n), constraints=LinearConstraint(A, lb=1), integrality=np.ones(n),
               bounds=Bounds(0, 1))
    assert res.success
    return int(round(res.fun))


def test_net_golden_within_factor_two_of_minimal_cover():
    inst, spec, x = golden_cos()
    net = greedy_eps_net(inst, spec, x, 0.25, W=200)
    F = inst.shifted_features(spec, x, net.sample_coords)
    D = np.stack([spec.distance(F, F[i]) for i in range(F.shape[0])])
    opt = _min_cover_size(D, 0.25)
    assert opt <= net.size <= 2 * opt


def test_net_invariants():
    inst, spec, x = golden_cos(W=300, window=50)
    for eps in (0.1, 0.4, 1.0):
        net = greedy_eps_net(inst, spec, x, eps, W=300)
        C = inst.shifted_features(spec, x, net.center_coords)
        S = inst.shifted_features(spec, x, net.sample_coords)
        assert np.all(spec.distance(S, C[net.assignments]) < eps)
        for i in range(net.size):
            d = spec.distance(C, C[i])
            d[i] = np.inf
            assert d.min() >= eps


def test_center_out_order_prefix_property():
    G = LatticeWindow(1, 5)
    c = np.arange(-5, 6).reshape(-1, 1)
    order = c[center_out_order(G, c), 0].tolist()
    assert order[:5] == [0, -1, 1, -2, 2]


def test_net_size_within_matches_smaller_window():
    inst, spec, x = golden_cos(W=400, window=30)
    big = greedy_eps_net(inst, spec, x, 0.3, W=400)
    small = greedy_eps_net(inst, spec, x, 0.3, W=200)
    assert big.size_within(200) == small.size


def test_net_restrict_is_the_smaller_scan():
    inst, spec, x = golden_cos(W=400, window=30)
    big = greedy_eps_net(inst, spec, x, 0.3, W=400)
    small = greedy_eps_net(inst, spec, x, 0.3, W=200)
    cut = big.restrict(200)
    assert np.array_equal(cut.center_coords, small.center_coords)
    assert np.array_equal(cut.sample_coords, small.sample_coords)
    # a kept assignment names a centre of the small net that is within eps
    ok = cut.assignments >= 0
    assert ok.any() and cut.assignments.max() < cut.size
    prof = profile(inst, spec, x, W=400)
    diffs = cut.sample_coords[ok] - cut.center_coords[cut.assignments[ok]]
    assert (prof.values[prof.index_of(diffs)] < 0.3).all()
    assert net_cover_bridge(inst, spec, x, 0.3, W=200, net=cut).ok


# -- classification --------------------------------------------------------

def test_classify_cyclic_matches_oracle():
    rng = np.random.default_rng(8)
    for _ in range(30):
        fix = random_fixture(rng, n_max=30)
        inst, pts = fixture_instance(fix)
        x = int(rng.integers(fix.size))
        grid = [Fraction(1, 2), Fraction(1, 5)]
        det = classify(inst, "table", pts[x], eps_grid=grid)
        ora = oracle_classify(fix, x, grid)
        assert det.verdicts == ora.verdicts
        assert len(set(det.verdicts)) == 1


def test_classify_period_two_point():
    inst, spec, x = cyclic_function([1, -1] * 3)
    cl = classify(inst, spec, x, eps_grid=[0.5])
    assert cl.verdicts == (PASS, PASS, PASS)
    assert cl.witnesses["hull_order"] == 2


def test_classify_trivial_group():
    inst, spec, x = cyclic_function([4.0])
    assert classify(inst, spec, x, eps_grid=[0.1]).verdicts == (PASS, PASS, PASS)


def test_classify_golden_trig():
    inst, spec, x = golden_cos(W=2000, window=50)
    cl = classify(inst, spec, x, eps_grid=[0.5, 0.25])
    assert cl.verdicts == (PASS, PASS, PASS)
    assert WINDOWED in cl.flags


def test_classify_counterexample():
    G = LatticeWindow(1, 300)
    inst = counterexample_instance(G)
    mu = counterexample_measure(20, group=G)
    cl = classify(inst, "vague", mu, eps_grid=[Fraction(1, 2)])
    assert cl.bohr == PASS and cl.bochner == FAIL
    assert cl.witnesses["compactness_probe"]["verdict"] == FAIL


def test_classify_without_completeness_is_inconclusive():
    G = LatticeWindow(1, 500)
    spec = SupGauge(G, window=40)
    inst = Instance(G, [spec], "SampledFunction", complete=False)
    x = make_trig_function([GOLDEN], [1.0], G)
    cl = classify(inst, spec, x, eps_grid=[0.5])
    assert cl.pseudo_bochner == PASS and cl.bochner == INCONCLUSIVE
    assert "COMPLETENESS_NOT_DECLARED" in cl.flags


def test_classify_rejects_bad_grid():
    inst, spec, x = alternating()
    with pytest.raises(UsageError):
        classify(inst, spec, x, eps_grid=[0.5, -1])
    with pytest.raises(UsageError):
        classify(inst, spec, x, eps_grid=[])


def test_default_eps_grid():
    inst, spec, x = alternating(W=10)
    grid = default_eps_grid(profile(inst, spec, x, 10))
    assert grid == [2.0, 1.0, 0.5, 0.25, 0.125]


def test_reports_csv_header_and_rows():
    inst, spec, x = alternating(W=4)
    reps = [almost_periods(inst, spec, x, 0.5, W=4, with_cover=False)]
    lines = reports_csv(reps).splitlines()
    assert lines[0] == "eps,t,gauge_value"
    assert [ln.split(",")[1] for ln in lines[1:]] == ["-4", "-2", "0", "2", "4"]


# -- bridges ---------------------------------------------------------------

def test_net_cover_bridge_golden():
    inst, spec, x = golden_cos(W=1000, window=50)
    for eps in (0.5, 0.2):
        res = net_cover_bridge(inst, spec, x, eps, W=1000)
        assert res.ok and res.checked == 2001


def test_density_cover_bridge_fine_lattice():
    G = FineLattice("0.1", 100)
    spec = SupGauge(G, window=4)
    inst = Instance(G, [spec], "SampledFunction", complete=True)
    x = make_trig_function([0.2, 0.2 * np.sqrt(2)], [1.0, 0.5], G)
    res = density_cover_bridge(inst, spec, x, 1.0, W=100, R=200)
    assert res.ok, res.violations[:3]
    assert res.details["F_size"] >= 1


def test_density_cover_needs_fine_lattice():
    inst, spec, x = alternating()
    with pytest.raises(UsageError):
        density_cover_bridge(inst, spec, x, 0.5)


def test_mixed_containment_cyclic_and_windowed():
    inst, spec, x = cyclic_function([0, 1, 0, 2, 0, 1, 0, 3])
    assert mixed_containment(inst, spec, x, 0.5, 1.5).ok
    G = FineLattice("0.1", 10)
    spec = SupGauge(G, window=2)
    inst = Instance(G, [spec], "SampledFunction")
    x = SampledFunction.from_formula(G, lambda c: np.cos(0.1 * c[..., 0] * 2 * np.pi / 3))
    res = mixed_containment(inst, spec, x, 0.3, 0.25, W=5)
    assert res.ok and res.checked > 0
