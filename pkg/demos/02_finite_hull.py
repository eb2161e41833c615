"""
Hull groups on Z/n
==================

On a finite cyclic group everything is exact.  The hull of a point is its
orbit modulo gauge zero, and it is a quotient of Z/n by the period group.
"""
import numpy as np

from apkit.constructions import build_hull_group, group_table_axioms
from apkit.gauges import SupGauge
from apkit.group import FiniteCyclic
from apkit.oracle import fixture_instance, oracle_hull, random_fixture
from apkit.points import SampledFunction
from apkit.space import Instance

# A 6-periodic pattern seen inside Z/12: the period group is {0, 6}.
G = FiniteCyclic(12)
sup = SupGauge(G)
inst = Instance(G, [sup], "SampledFunction", complete=True)
x = SampledFunction.from_values(G, np.array(list(range(6)) * 2, dtype=float))
H = build_hull_group(inst, sup, x)
print("periods:", H.periods, " hull order:", H.order, " cyclic of order 6:", H.is_cyclic_of_order(6))
print("addition table:")
for row in H.add_table:
    print("  ", row)
print("axioms:", group_table_axioms(H.add_table))

# Random fixtures: orbits of Z/n with a graph metric averaged over the group.
# The hull built from the detectors agrees with the brute-force one.
rng = np.random.default_rng(3)
for _ in range(5):
    fix = random_fixture(rng, n_max=30)
    finst, pts = fixture_instance(fix)
    mine = build_hull_group(finst, "table", pts[0])
    ref = oracle_hull(fix, 0)
    print(f"n={fix.n:2d} orbits={fix.orbit_sizes}  |H|={mine.order:2d} |Per|={len(mine.periods):2d} "
          f"oracle |H|={ref.order:2d}")
