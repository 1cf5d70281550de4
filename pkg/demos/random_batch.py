"""Solve a seeded family of random instances and summarize what happened.

Run with ``python demos/random_batch.py [count] [seed]``.
"""

import sys
from collections import Counter

from sqrtefx import RunConfig, run
from sqrtefx.generate import random_family
from sqrtefx.verify import Alpha, efx_factor_squared, is_alpha_efx, ratio_lt

count = int(sys.argv[1]) if len(sys.argv) > 1 else 300
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0

rules = Counter()
worst, worst_k, exact = None, None, 0
for k, inst in random_family(count, seed):
    rep = run(inst, RunConfig(check_invariants=True))
    assert is_alpha_efx(inst, rep.final_allocation, Alpha.INV_SQRT2).ok
    rules.update(rep.rule_histogram())
    f = efx_factor_squared(inst, rep.final_allocation)
    exact += not ratio_lt(f, (1, 1))
    if worst is None or ratio_lt(f, worst):
        worst, worst_k = f, k

print(f"{count} instances, all 1/sqrt(2)-EFX with every invariant checked")
print("rule applications:", dict(sorted(rules.items())))
print(f"exactly EFX: {exact}/{count}")
print(f"smallest alpha^2: {worst[0]}/{worst[1]} (instance {worst_k}); the guarantee is 1/2")
