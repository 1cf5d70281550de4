"""Walk through the three-agent, four-good worked example step by step.

Run with ``python demos/worked_example.py``.
"""

from sqrtefx import Instance, RunConfig, run
from sqrtefx.engine import apply_event, basic_feasible_allocation
from sqrtefx.envy_graph import Threshold, build_graph, in_g_alpha
from sqrtefx.model import AllocationState
from sqrtefx.verify import Alpha, efx_factor_squared, is_alpha_efx

# rows are agents, columns are goods; every good matters to at most two agents
inst = Instance.from_dense([[2, 3, 1, 0],
                            [8, 3, 0, 4],
                            [0, 0, 4, 3]])

# A partial allocation that is 1/sqrt(2)-EFX but not EFX.
partial = {0: frozenset({1, 2}), 1: frozenset({0}), 2: frozenset({3})}
g = build_graph(inst, AllocationState([0, 1, 2], [], dict(partial), {}, frozenset(), None))
print("envy weights v_i(X_j) / v_i(X_i):")
for (i, j), e in sorted(g.edges.items()):
    if e.num:
        tag = "envy" if in_g_alpha(e, Threshold.ONE) else ("heavy" if in_g_alpha(e, "inv-sqrt2") else "light")
        print(f"  a{i + 1} -> a{j + 1}: {e.num}/{e.den}  {tag}")
print("1/sqrt(2)-EFX:", is_alpha_efx(inst, partial, Alpha.INV_SQRT2).ok)
v = is_alpha_efx(inst, partial, Alpha.ONE)
print("EFX:", v.ok, "witness:", v.witness)

# The algorithm from scratch.
st = basic_feasible_allocation(inst)
print("\nbasic feasible allocation:", {i: sorted(b) for i, b in st.bundles_remaining.items()},
      "pool:", sorted(st.pool))
report = run(inst, RunConfig(check_invariants=True))
st = AllocationState.empty(inst)
for ev in report.events:
    st = apply_event(inst, st, ev)
    print(f"{ev.rule:<14} actors={ev.actors} moved={ev.moved} note={ev.note!r}")
print("\nfinal allocation:", {i: sorted(b) for i, b in report.final_allocation.items()})
print("alpha^2 of the result:", efx_factor_squared(inst, report.final_allocation))
