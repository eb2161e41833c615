"""
Invariant metric, mixed gauge, and gauges on measures
=====================================================
"""
import numpy as np

from apkit.constructions import invariant_metric_eval, mixed_gauge_eval
from apkit.gauges import AutocorrelationGauge, MeasureNormGauge
from apkit.group import FineLattice, LatticeWindow
from apkit.instances import GOLDEN, make_comb, make_sturmian_set
from apkit.oracle import engineered_noninvariant_fixture, fixture_instance
from apkit.space import Instance, check_invariance

# A gauge that is not invariant: a weighted path metric on one free orbit.
# Taking the sup over translates gives an invariant metric that dominates it.
fix = engineered_noninvariant_fixture(6)
inst, pts = fixture_instance(fix)
print("invariance:", check_invariance(inst, "table", [0.5], pts).verdict)
for q in (1, 2, 3):
    v = invariant_metric_eval(inst, "table", pts[0], pts[q])
    print(f"gauge(0,{q}) = {fix.gauge(0, q)}   dbar = {v.dbar}   d' = {v.dprime}")

# On a fine lattice a small translation should count as close.  The mixed
# gauge allows a shift of size < r before comparing.
G = FineLattice("0.1", 20)
norm = MeasureNormGauge(G, K=2, window=5)
minst = Instance(G, [norm], "PointMeasure", complete=True)
comb = make_comb(G, 10)
moved = minst.act(1, comb)            # shifted by one step h = 0.1
print("norm gauge after a 0.1 shift:", minst.gauge(norm, comb, moved))
print("mixed gauge with r = 0.25:   ", mixed_gauge_eval(minst, norm, comb, moved, 0.25))

# Autocorrelation gauge on the golden Sturmian set, small at the Fibonacci shifts.
Z = LatticeWindow(1, 200)
ac = AutocorrelationGauge(Z, n=[25, 50, 100])
sinst = Instance(Z, [ac], "PointSet")
s = make_sturmian_set(GOLDEN, 0.0, Z)
for t in (1, 13, 21, 34):
    print(f"autocorrelation gauge at shift {t:2d}:", sinst.gauge(ac, s, sinst.act(t, s)))
print("fraction of points in the window:", np.mean(s.at(np.arange(-200, 201).reshape(-1, 1))))
