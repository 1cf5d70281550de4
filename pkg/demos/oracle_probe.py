"""Compare the solver with exhaustive search on tiny instances.

For each instance the oracle enumerates all n^m allocations and reports the
best achievable alpha^2; the solver's result can never beat it.
Run with ``python demos/oracle_probe.py [count]``.
"""

import sys

from sqrtefx import run
from sqrtefx.generate import random_family
from sqrtefx.oracle import best_alpha_squared
from sqrtefx.verify import efx_factor_squared, ratio_lt


def fmt(r):
    return "inf" if r[1] == 0 else f"{r[0]}/{r[1]}"


count = int(sys.argv[1]) if len(sys.argv) > 1 else 40
gaps = 0
for k, inst in random_family(count, seed=1, n_range=(2, 3), m_range=(2, 7)):
    best, _ = best_alpha_squared(inst)
    got = efx_factor_squared(inst, run(inst).final_allocation)
    assert not ratio_lt(best, got)
    gap = ratio_lt(got, best) and ratio_lt(got, (1, 1))
    gaps += gap
    if gap:
        print(f"instance {k}: n={inst.n} m={inst.m} solver {fmt(got)} oracle {fmt(best)}")
print(f"{count} instances; solver below both the optimum and 1 on {gaps}")
