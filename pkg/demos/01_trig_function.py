"""
A Bohr almost periodic function on the integers
================================================

f(n) = cos(2 pi phi n) with phi the golden ratio conjugate.  We look at its
almost periods, the greedy nets of its orbit and the three verdicts.
"""
import numpy as np

from apkit.detectors import almost_periods, classify, greedy_eps_net
from apkit.gauges import SupGauge
from apkit.group import LatticeWindow
from apkit.instances import GOLDEN, make_trig_function
from apkit.space import Instance

W = 2000
G = LatticeWindow(1, W)
sup = SupGauge(G, window=50)
inst = Instance(G, [sup], "SampledFunction", complete=True)
f = make_trig_function([GOLDEN], [1.0], G)

# The almost periods for eps = 1/4 are the n with phi*n close to an integer.
# Their gaps only take a few values (three distance theorem).
rep = almost_periods(inst, sup, f, 0.25, W=W)
P = rep.periods[:, 0]
print("number of 1/4-almost periods in [-W, W]:", len(P))
print("first positive ones:", P[P > 0][:10].tolist())
print("distinct gaps:", np.unique(np.diff(P)).tolist())
print("relative density: R_min =", rep.rel_dense.R_min, "->", rep.rel_dense.verdict)

# The orbit is totally bounded: the greedy net stops growing once the
# window is large enough.
for eps in (1.0, 0.5, 0.25, 0.125):
    net = greedy_eps_net(inst, sup, f, eps, W=2 * W)
    print(f"eps={eps:<6} net size on W: {net.size_within(W):3d}   on 2W: {net.size:3d}")

cl = classify(inst, sup, f, W=W)
print("verdicts (bohr, pseudo-Bochner, Bochner):", cl.verdicts, cl.flags)
