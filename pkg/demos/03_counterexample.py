"""
A measure that is Bohr almost periodic for the vague topology but not Bochner
=============================================================================

mu = sum_n n * (Dirac comb on 5^(n+1) Z + 2 * 5^n).  Tests supported in
(-5^N, 5^N) cannot see the terms n >= N, and the terms n < N are
5^N-periodic, so 5^N + 5^(N+1) Z are exact almost periods.  The atom weights
grow without bound, so the orbit is not relatively compact.
"""
from apkit.detectors import classify
from apkit.group import LatticeWindow
from apkit.instances import (MAX_TERMS, counterexample_instance, counterexample_measure, growth_row,
                             interval_checks, progression_listing)

mu = counterexample_measure(MAX_TERMS)

# integer checks of the three interval statements
for N in (1, 2, 3):
    for row in interval_checks(N, 700):
        print(f"N={N}  {row.check:<36} {row.verdict}  ({row.shifts_checked} shifts)")

# the progression 5^N + 5^(N+1) Z inside the vague almost periods
for N in (1, 2, 3, 4):
    row = progression_listing(mu, N, 5 ** 5)
    print(f"N={N} hat radius {row['hatRadius']:4d}: progression {row['progression'][:4]}... "
          f"missing {row['missing']} -> {row['verdict']}")

# the largest atom up to 2*5^N is N: no uniform bound on local mass
print("local mass growth:", [(g["N"], g["norm"]) for g in (growth_row(mu, N) for N in range(1, 8))])

G = LatticeWindow(1, 300)
inst = counterexample_instance(G)
cl = classify(inst, "vague", counterexample_measure(MAX_TERMS, group=G), eps_grid=[0.5], W=300)
print("verdicts (bohr, pseudo-Bochner, Bochner):", cl.verdicts)
print("compactness probe:", cl.witnesses["compactness_probe"])
