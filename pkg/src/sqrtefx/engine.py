"""The 1/sqrt(2)-EFX allocation algorithm: basic feasible start, five update rules, final step.

Each ``ruleN(inst, st)`` either returns None (not applicable, ``st``
untouched) or mutates ``st`` and returns the RuleEvent describing the
change. ``run`` applies the first applicable rule until none applies.

Every "pick one" choice scans in a fixed order (smallest agent id, smallest
ordered pair, first cycle, first seam along the cycle) so runs are
reproducible.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

from .envy_graph import (CycleKind, Threshold, build_graph, decompose_cycles,
                         find_heavy_light_triple, in_g_alpha, is_heavy)
from .errors import EngineBugError, InvalidInstanceError, NonTerminationError
from .matching import nash_assignment
from .model import AllocationState, Instance, relevant_to, relevant_to_pair, state_partition_check
from .two_agent import TwoAgentProblem, complete_two_agent
from .verify import Alpha, check_properties, is_alpha_efx

log = logging.getLogger(__name__)

RULES = ("BasicFeasible", "R1", "R2", "R3", "R4", "R5", "Final")


@dataclass(frozen=True)
class RuleEvent:
    rule: str
    actors: tuple
    moved: tuple            # (good, from_location, to_location), sorted by good
    finalized: tuple        # agents finalized by this event, in order
    welfare_before: int
    welfare_after: int
    pre_digest: str
    state_digest: str
    note: str = ""
    properties: tuple = ()  # Verdicts, filled in check mode

    def to_dict(self) -> dict:
        d = {
            "type": "event", "rule": self.rule, "actors": list(self.actors),
            "moved": [list(m) for m in self.moved], "finalized": list(self.finalized),
            "welfare_before": self.welfare_before, "welfare_after": self.welfare_after,
            "pre_digest": self.pre_digest, "state_digest": self.state_digest,
        }
        if self.note:
            d["note"] = self.note
        if self.properties:
            d["properties"] = [v.to_dict() for v in self.properties]
        return d


@dataclass
class RunConfig:
    check_invariants: bool = False
    max_events: int | None = None  # default 10 * (n + m) ** 2


@dataclass
class RunReport:
    final_allocation: dict
    events: list
    iterations: int
    cycle_decompositions: int = 0

    def rule_histogram(self) -> Counter:
        return Counter(e.rule for e in self.events)


def _event(rule, actors, inst, pre, st, finalized=(), note=""):
    before, after = pre.locations(), st.locations()
    moved = tuple((g, before.get(g, "pool"), after[g])
                  for g in sorted(after) if before.get(g, "pool") != after[g])
    return RuleEvent(rule, tuple(actors), moved, tuple(finalized),
                     pre.welfare(inst), st.welfare(inst), pre.digest(), st.digest(), note)


def basic_feasible_allocation(inst: Instance) -> AllocationState:
    """One good per agent maximizing (#positive, product of values); rest pooled.

    An agent the optimum can only match to a good it values at 0 starts with
    an empty bundle instead; that good may matter to two other agents, and
    holding it would break the single-type property from the first step.
    """
    if inst.m < inst.n:
        raise InvalidInstanceError(f"instance has fewer goods ({inst.m}) than agents ({inst.n})")
    goods = nash_assignment(inst)
    st = AllocationState.empty(inst)
    st.bundles_remaining = {i: frozenset({g}) if inst.value(i, g) > 0 else frozenset()
                            for i, g in enumerate(goods)}
    held = frozenset().union(*st.bundles_remaining.values())
    st.pool = frozenset(range(inst.m)) - held
    return st


def _min_envied_prefix(inst, agent, own_value, goods):
    """Shortest set among ``goods`` worth more than ``own_value`` to ``agent``."""
    ranked = sorted(goods, key=lambda g: (-inst.value(agent, g), g))
    total = 0
    for k, g in enumerate(ranked):
        total += inst.value(agent, g)
        if total > own_value:
            return frozenset(ranked[:k + 1])
    return None


def rule1(inst: Instance, st: AllocationState):
    """Swap in a minimum-size envied subset of goods shared by a remaining pair."""
    for i in st.remaining:
        own_i = inst.v(i, st.bundles_remaining[i])
        for j in st.remaining:
            if i == j:
                continue
            shared = relevant_to_pair(inst, st.pool, i, j)
            if inst.v(i, shared) <= own_i:
                continue
            own_j = inst.v(j, st.bundles_remaining[j])
            s_i = _min_envied_prefix(inst, i, own_i, shared)
            s_j = _min_envied_prefix(inst, j, own_j, shared)
            s = s_i if s_j is None or len(s_i) <= len(s_j) else s_j
            envier = i if inst.v(i, s) > own_i else j
            pre = st.copy()
            old = st.bundles_remaining[envier]
            st.bundles_remaining[envier] = s
            st.pool = (st.pool - s) | old
            return _event("R1", (i, j, envier), inst, pre, st)
    return None


def rule2(inst: Instance, st: AllocationState):
    """Finalize the first agent who values no other remaining bundle."""
    g = build_graph(inst, st)
    for i in st.remaining:
        if g.successors(i):
            continue
        pre = st.copy()
        a = st.bundles_remaining[i]
        b = relevant_to(inst, st.pool, i)
        if inst.v(i, a) < inst.v(i, b):
            st.pool = (st.pool | a) - b
            st.finalize(i, b)
        else:
            st.finalize(i, a)
        return _event("R2", (i,), inst, pre, st, finalized=(i,))
    return None


def rule3(inst: Instance, st: AllocationState, cycles=None):
    """Resolve a 2-cycle of the positive envy graph."""
    g = build_graph(inst, st)
    if cycles is None:
        cycles = decompose_cycles(g)
    two = [c for c in cycles if len(c.vertices) == 2]
    if not two:
        return None
    a, b = sorted(two[0].vertices)
    pre = st.copy()

    if len(st.remaining) == 2:
        prob = TwoAgentProblem(inst, a, b, st.bundles_remaining[a], st.bundles_remaining[b],
                               st.pool)
        ya, yb = complete_two_agent(prob)
        st.pool = frozenset()
        st.finalize(a, ya)
        st.finalize(b, yb)
        return _event("R3", (a, b), inst, pre, st, finalized=(a, b), note="two-agent-completion")

    xa, xb = st.bundles_remaining[a], st.bundles_remaining[b]
    a_envies = inst.v(a, xb) > inst.v(a, xa)
    b_envies = inst.v(b, xa) > inst.v(b, xb)
    note = ""
    if a_envies and b_envies:
        st.bundles_remaining[a], st.bundles_remaining[b] = xb, xa
        note = "swapped"
        a_envies = b_envies = False
    # label so that j does not envy i
    i, j = (b, a) if b_envies and not a_envies else (a, b)

    xi, xj = st.bundles_remaining[i], st.bundles_remaining[j]
    r_i = relevant_to(inst, st.pool, i)
    r_ij = relevant_to_pair(inst, st.pool, i, j)
    bundle_a = xi | (r_i - r_ij)
    bundle_b = xj
    bundle_c = relevant_to(inst, st.pool, j)
    if inst.v(j, bundle_b) >= inst.v(j, bundle_c):
        final_j, final_i = bundle_b, bundle_a
    else:
        final_j = bundle_c
        final_i = bundle_a if inst.v(i, bundle_a) >= inst.v(i, bundle_b) else bundle_b
    st.pool = (st.pool | xi | xj) - final_i - final_j
    st.finalize(j, final_j)
    st.finalize(i, final_i)
    return _event("R3", (i, j), inst, pre, st, finalized=(j, i), note=note)


def rule4(inst: Instance, st: AllocationState, cycles=None):
    """Finalize a homogeneous cycle, rotating bundles first if it is heavy."""
    g = build_graph(inst, st)
    if cycles is None:
        cycles = decompose_cycles(g)
    homog = [c for c in cycles if c.kind is not CycleKind.MIXED]
    if not homog:
        return None
    c = homog[0]
    vs = c.vertices
    k = len(vs)
    pre = st.copy()
    heavy = c.kind is CycleKind.HEAVY
    if heavy:
        old = {v: st.bundles_remaining[v] for v in vs}
        for t in range(k):
            st.bundles_remaining[vs[t]] = old[vs[(t + 1) % k]]
        # rotation reverses every edge: vs[t+1] -> vs[t]
        edges = {(vs[(t + 1) % k], vs[t]) for t in range(k)}
    else:
        edges = {(vs[t], vs[(t + 1) % k]) for t in range(k)}

    members = set(vs)
    extra = {v: set() for v in vs}
    for good in sorted(st.pool):
        rel = [x for x in inst.agents_of(good) if x in members]
        if not rel:
            continue
        if len(rel) == 2:
            x, y = rel
            if (x, y) in edges:
                extra[x].add(good)
            elif (y, x) in edges:
                extra[y].add(good)
            else:
                extra[min(x, y)].add(good)
        else:
            extra[rel[0]].add(good)
    taken = set().union(*extra.values())
    st.pool = st.pool - taken
    for v in vs:
        st.finalize(v, st.bundles_remaining[v] | extra[v])
    return _event("R4", vs, inst, pre, st, finalized=vs,
                  note="rotated" if heavy else "light")


def rule5(inst: Instance, st: AllocationState, cycles=None):
    """Resolve a heterogeneous cycle at its first heavy-then-light seam."""
    g = build_graph(inst, st)
    if cycles is None:
        cycles = decompose_cycles(g)
    mixed = [c for c in cycles if c.kind is CycleKind.MIXED]
    if not mixed:
        return None
    i, j, k = find_heavy_light_triple(mixed[0], g)
    pre = st.copy()
    xj = st.bundles_remaining[j]
    pool_j = inst.v(j, st.pool)
    own_j = inst.v(j, xj)
    if 2 * pool_j * pool_j <= own_j * own_j:
        st.finalize(j, xj)
        return _event("R5", (i, j, k), inst, pre, st, finalized=(j,), note="keep")
    r_j = relevant_to(inst, st.pool, j)
    r_i_only = relevant_to(inst, st.pool, i) - relevant_to_pair(inst, st.pool, i, j)
    xi = st.bundles_remaining[i]
    final_i = xj | r_i_only
    st.pool = (st.pool - r_j - r_i_only) | xi
    st.finalize(j, r_j)
    st.finalize(i, final_i)
    return _event("R5", (i, j, k), inst, pre, st, finalized=(j, i), note="split")


def final_step(inst: Instance, st: AllocationState) -> RuleEvent:
    """Hand every leftover pool good to the last finalized agent."""
    if st.remaining:
        raise EngineBugError(f"final step with remaining agents {st.remaining}")
    pre = st.copy()
    if st.pool:
        if st.last_finalized is None:
            raise EngineBugError("pool is nonempty but no agent was ever finalized")
        last = st.last_finalized
        st.bundles_final[last] = st.bundles_final[last] | st.pool
        st.pool = frozenset()
    actors = () if st.last_finalized is None else (st.last_finalized,)
    return _event("Final", actors, inst, pre, st)


def step(inst: Instance, st: AllocationState, stats: Counter | None = None):
    """Apply the first applicable rule; None when no rule applies."""
    for rule in (rule1, rule2):
        ev = rule(inst, st)
        if ev is not None:
            return ev
    if not st.remaining:
        return None
    # rules 1 and 2 are out, so G_0 must split into disjoint cycles
    cycles = decompose_cycles(build_graph(inst, st))
    if stats is not None:
        stats["cycle_decompositions"] += 1
    for rule in (rule3, rule4, rule5):
        ev = rule(inst, st, cycles)
        if ev is not None:
            return ev
    raise EngineBugError(f"no rule applies with remaining agents {st.remaining}")


def _check(inst, st, ev, prev_remaining):
    verdicts = [state_partition_check(inst, st)] + check_properties(inst, st)
    for v in verdicts:
        if not v.ok:
            raise EngineBugError(f"{v.label} fails after {ev.rule}: {v.witness}", ev, v)
    if ev.rule == "R1" and not ev.welfare_after > ev.welfare_before:
        raise EngineBugError("R1 did not raise remaining welfare", ev)
    if ev.rule in ("R2", "R3", "R4", "R5") and not len(st.remaining) < prev_remaining:
        raise EngineBugError(f"{ev.rule} did not shrink the remaining set", ev)
    return tuple(verdicts[1:])


def run(inst: Instance, cfg: RunConfig | None = None) -> RunReport:
    """Run the whole algorithm and return the complete allocation plus its trace."""
    cfg = cfg or RunConfig()
    cap = cfg.max_events if cfg.max_events is not None else 10 * (inst.n + inst.m) ** 2
    empty = AllocationState.empty(inst)
    st = basic_feasible_allocation(inst)
    events = [_event("BasicFeasible", tuple(range(inst.n)), inst, empty, st)]
    stats = Counter()

    def record(ev, prev_remaining):
        if cfg.check_invariants:
            props = _check(inst, st, ev, prev_remaining)
            ev = RuleEvent(**{**ev.__dict__, "properties": props})
        events.append(ev)

    if cfg.check_invariants:
        events[0] = RuleEvent(**{**events[0].__dict__,
                                 "properties": _check(inst, st, events[0], inst.n + 1)})
    while st.remaining:
        if len(events) > cap:
            raise NonTerminationError(f"exceeded {cap} events", events[-1])
        prev = len(st.remaining)
        ev = step(inst, st, stats)
        if ev is None:
            break
        record(ev, prev)
    record(final_step(inst, st), len(st.remaining) + 1)

    alloc = {i: st.bundles_final[i] for i in range(inst.n)}
    if cfg.check_invariants:
        v = is_alpha_efx(inst, alloc, Alpha.INV_SQRT2)
        if not v.ok:
            raise EngineBugError(f"final allocation is not 1/sqrt(2)-EFX: {v.witness}",
                                 events[-1], v)
    log.debug("solved n=%d m=%d in %d events", inst.n, inst.m, len(events))
    return RunReport(alloc, events, len(events), stats["cycle_decompositions"])


def apply_event(inst: Instance, st: AllocationState, ev: RuleEvent) -> AllocationState:
    """Rebuild the post-state of ``ev`` from its recorded moves alone."""
    out = st.copy()
    pool = set(out.pool)
    rem = {i: set(b) for i, b in out.bundles_remaining.items()}
    fin = {i: set(b) for i, b in out.bundles_final.items()}
    for agent in ev.finalized:
        if agent not in out.remaining:
            raise ValueError(f"{ev.rule} finalizes agent {agent}, who is not remaining")
        out.remaining.remove(agent)
        out.finalized.append(agent)
        fin[agent] = rem.pop(agent)
        out.last_finalized = agent

    def place(loc):
        if loc == "pool":
            return pool
        kind, _, agent = loc.partition(":")
        target = rem if kind == "remaining" else fin if kind == "final" else None
        if target is None or not agent.isdigit() or int(agent) not in target:
            raise ValueError(f"{ev.rule} moves a good to unknown location {loc!r}")
        return target[int(agent)]

    for good, src, dst in ev.moved:
        # a good that followed its holder into the finalized set is not "moved"
        for holder in (pool, *rem.values(), *fin.values()):
            holder.discard(good)
        place(dst).add(good)
    out.pool = frozenset(pool)
    out.bundles_remaining = {i: frozenset(rem[i]) for i in out.remaining}
    out.bundles_final = {i: frozenset(fin[i]) for i in out.finalized}
    return out


def replay(inst: Instance, events) -> list:
    """Re-derive a trace; returns a list of mismatch descriptions (empty = clean).

    Each event is checked two ways: applying its recorded moves to the
    previous state must land on its post digest, and re-running the engine
    from that state must emit the same rule and moves. Rules with a smaller
    number must also be inapplicable at that state.
    """
    problems = []
    st = AllocationState.empty(inst)
    for idx, ev in enumerate(events):
        if ev.pre_digest != st.digest():
            problems.append(f"event {idx}: pre digest {ev.pre_digest} != {st.digest()}")
        try:
            nxt = apply_event(inst, st, ev)
        except ValueError as exc:
            problems.append(f"event {idx}: {exc}")
            break
        if nxt.digest() != ev.state_digest:
            problems.append(f"event {idx}: moves give {nxt.digest()}, trace says {ev.state_digest}")
        if ev.rule == "BasicFeasible":
            again = _event("BasicFeasible", ev.actors, inst, st, basic_feasible_allocation(inst))
        elif ev.rule == "Final":
            again = final_step(inst, st.copy())
        else:
            k = RULES.index(ev.rule)
            probes = [rule1, rule2, rule3, rule4, rule5]
            for earlier in probes[:k - 1]:
                if earlier(inst, st.copy()) is not None:
                    problems.append(f"event {idx}: {earlier.__name__} was applicable before {ev.rule}")
            again = step(inst, st.copy())
        if again is None or (again.rule, again.moved, again.finalized) != (ev.rule, ev.moved, ev.finalized):
            problems.append(f"event {idx}: engine step does not reproduce {ev.rule}")
        st = nxt
    return problems
