"""Instances, bundles, the live allocation state, and additive valuation helpers.

Values are nonnegative Python ints. Every comparison the algorithm makes
against 1/sqrt(2) is done on squared integers, so nothing here ever rounds.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, InvalidInstanceError

Bundle = frozenset  # frozenset[int] of good ids
Allocation = Mapping[int, frozenset]


@dataclass(frozen=True)
class Instance:
    """A (2, inf)-bounded additive instance.

    ``valuation[g]`` lists the ``(agent, value)`` pairs with positive value
    for good ``g``, at most two per good, sorted by agent id.
    """

    n: int
    m: int
    valuation: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidInstanceError(f"agent count must be a positive int, got {self.n!r}")
        if not isinstance(self.m, int) or self.m < 0:
            raise InvalidInstanceError(f"good count must be a nonnegative int, got {self.m!r}")
        if len(self.valuation) != self.m:
            raise InvalidInstanceError(
                f"valuation has {len(self.valuation)} goods, expected {self.m}")
        rows = [dict() for _ in range(self.n)]
        normalized = []
        for g, entries in enumerate(self.valuation):
            cleaned = []
            seen = set()
            for agent, value in entries:
                if not isinstance(agent, int) or not 0 <= agent < self.n:
                    raise InvalidInstanceError(f"good {g}: agent id {agent!r} out of range")
                if not isinstance(value, int) or isinstance(value, bool):
                    raise InvalidInstanceError(f"good {g}: value {value!r} is not an int")
                if value < 0:
                    raise InvalidInstanceError(f"good {g}: negative value {value}")
                if agent in seen:
                    raise InvalidInstanceError(f"good {g}: agent {agent} listed twice")
                seen.add(agent)
                if value > 0:
                    cleaned.append((agent, value))
            if len(cleaned) > 2:
                raise InvalidInstanceError(
                    f"good {g} is relevant to {len(cleaned)} agents; at most 2 allowed")
            cleaned.sort()
            normalized.append(tuple(cleaned))
            for agent, value in cleaned:
                rows[agent][g] = value
        object.__setattr__(self, "valuation", tuple(normalized))
        object.__setattr__(self, "_rows", tuple(rows))

    @classmethod
    def from_dense(cls, values: Sequence[Sequence[int]]) -> "Instance":
        """Build from an n-by-m matrix ``values[agent][good]``."""
        n = len(values)
        m = len(values[0]) if n else 0
        if any(len(row) != m for row in values):
            raise InvalidInstanceError("ragged valuation matrix")
        goods = [[(i, int(values[i][g])) for i in range(n) if values[i][g] != 0]
                 for g in range(m)]
        return cls(n, m, tuple(tuple(e) for e in goods))

    def value(self, agent: int, good: int) -> int:
        return self._rows[agent].get(good, 0)

    def v(self, agent: int, goods: Iterable[int]) -> int:
        # unchecked hot path; use bundle_value() at API boundaries
        row = self._rows[agent]
        return sum(row.get(g, 0) for g in goods)

    def relevant_goods(self, agent: int) -> dict:
        """Map good -> positive value for ``agent`` (read-only view)."""
        return self._rows[agent]

    def agents_of(self, good: int) -> tuple:
        """Agents with positive value for ``good``."""
        return tuple(a for a, _ in self.valuation[good])

    def dense(self) -> list:
        return [[self.value(i, g) for g in range(self.m)] for i in range(self.n)]


def _check_agent(inst: Instance, agent: int) -> None:
    if not 0 <= agent < inst.n:
        raise DomainError(f"agent {agent} out of range [0, {inst.n})")


def _check_goods(inst: Instance, goods: Iterable[int]) -> None:
    for g in goods:
        if not 0 <= g < inst.m:
            raise DomainError(f"good {g} out of range [0, {inst.m})")


def bundle_value(inst: Instance, agent: int, bundle: Iterable[int]) -> int:
    """Additive value of ``bundle`` for ``agent``; unlisted goods count as 0."""
    _check_agent(inst, agent)
    bundle = tuple(bundle)
    _check_goods(inst, bundle)
    row = inst._rows[agent]
    return sum(row.get(g, 0) for g in bundle)


def relevant_to(inst: Instance, goods: Iterable[int], agent: int) -> frozenset:
    """Goods of ``goods`` with positive value for ``agent``."""
    _check_agent(inst, agent)
    goods = tuple(goods)
    _check_goods(inst, goods)
    row = inst._rows[agent]
    return frozenset(g for g in goods if g in row)


def relevant_to_pair(inst: Instance, goods: Iterable[int], i: int, j: int) -> frozenset:
    """Goods relevant to both ``i`` and ``j``.

    With ``i == j`` this is the set of goods relevant to ``i`` and nobody else.
    """
    _check_agent(inst, i)
    _check_agent(inst, j)
    goods = tuple(goods)
    _check_goods(inst, goods)
    if i == j:
        return frozenset(g for g in goods if inst.agents_of(g) == (i,))
    ri, rj = inst._rows[i], inst._rows[j]
    return frozenset(g for g in goods if g in ri and g in rj)


@dataclass(frozen=True)
class Witness:
    kind: str
    agents: tuple = ()
    good: int | None = None
    lhs: int | None = None
    rhs: int | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "agents": list(self.agents), "good": self.good,
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check. ``ok`` is False exactly when ``witness`` is set.

    For comparison checks ``lhs < rhs`` is the violated inequality, with both
    sides already squared.
    """

    ok: bool
    witness: Witness | None = None
    label: str = ""

    def __post_init__(self):
        if self.ok == (self.witness is not None):
            raise ValueError("Verdict.ok must be False iff a witness is present")

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"label": self.label, "ok": self.ok,
                "witness": None if self.witness is None else self.witness.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        w = d.get("witness")
        witness = None if w is None else Witness(
            w["kind"], tuple(w["agents"]), w["good"], w["lhs"], w["rhs"])
        return cls(d["ok"], witness, d.get("label", ""))


OK = Verdict(True)


@dataclass
class AllocationState:
    """Remaining agents with mutable bundles, finalized agents, and the pool.

    ``remaining`` is kept sorted so every "pick an agent" step scans in
    ascending id order; ``finalized`` is in finalization order.
    """

    remaining: list
    finalized: list
    bundles_remaining: dict
    bundles_final: dict
    pool: frozenset
    last_finalized: int | None = None

    @classmethod
    def empty(cls, inst: Instance) -> "AllocationState":
        """All agents remaining with empty bundles, every good in the pool."""
        return cls(list(range(inst.n)), [], {i: frozenset() for i in range(inst.n)}, {},
                   frozenset(range(inst.m)))

    def copy(self) -> "AllocationState":
        return AllocationState(list(self.remaining), list(self.finalized),
                               dict(self.bundles_remaining), dict(self.bundles_final),
                               self.pool, self.last_finalized)

    def finalize(self, agent: int, bundle: Iterable[int]) -> None:
        """Move ``agent`` from the remaining set to the finalized set."""
        self.remaining.remove(agent)
        del self.bundles_remaining[agent]
        self.finalized.append(agent)
        self.bundles_final[agent] = frozenset(bundle)
        self.last_finalized = agent

    def welfare(self, inst: Instance) -> int:
        """Sum over remaining agents of the value of their own bundle."""
        return sum(bundle_value(inst, i, self.bundles_remaining[i]) for i in self.remaining)

    def locations(self) -> dict:
        """Map good -> location tag: ``pool``, ``remaining:<i>`` or ``final:<i>``."""
        loc = {g: "pool" for g in self.pool}
        for i, b in self.bundles_remaining.items():
            for g in b:
                loc[g] = f"remaining:{i}"
        for i, b in self.bundles_final.items():
            for g in b:
                loc[g] = f"final:{i}"
        return loc

    def to_dict(self) -> dict:
        return {
            "remaining": list(self.remaining),
            "finalized": list(self.finalized),
            "bundles_remaining": {str(i): sorted(self.bundles_remaining[i])
                                  for i in sorted(self.bundles_remaining)},
            "bundles_final": {str(i): sorted(self.bundles_final[i])
                              for i in sorted(self.bundles_final)},
            "pool": sorted(self.pool),
            "last_finalized": self.last_finalized,
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def allocation(self) -> dict:
        """Final bundles of every agent (remaining agents' live bundles included)."""
        out = dict(self.bundles_final)
        out.update(self.bundles_remaining)
        return {i: out[i] for i in sorted(out)}


def state_partition_check(inst: Instance, st: AllocationState) -> Verdict:
    """Check that agents and goods are partitioned as the state requires."""
    label = "partition"
    seen_agents = set()
    for a in list(st.remaining) + list(st.finalized):
        if a in seen_agents:
            return Verdict(False, Witness("agent-partition", (a,)), label)
        if not 0 <= a < inst.n:
            return Verdict(False, Witness("agent-range", (a,)), label)
        seen_agents.add(a)
    missing = sorted(set(range(inst.n)) - seen_agents)
    if missing:
        return Verdict(False, Witness("agent-partition", tuple(missing)), label)
    if set(st.bundles_remaining) != set(st.remaining):
        bad = sorted(set(st.bundles_remaining) ^ set(st.remaining))
        return Verdict(False, Witness("key-mismatch", tuple(bad)), label)
    if set(st.bundles_final) != set(st.finalized):
        bad = sorted(set(st.bundles_final) ^ set(st.finalized))
        return Verdict(False, Witness("key-mismatch", tuple(bad)), label)
    if st.finalized and st.last_finalized not in st.finalized:
        return Verdict(False, Witness("last-finalized", (st.last_finalized,)), label)

    owner = {}
    holders = [(None, st.pool)]
    holders += [(i, st.bundles_remaining[i]) for i in sorted(st.bundles_remaining)]
    holders += [(i, st.bundles_final[i]) for i in sorted(st.bundles_final)]
    for who, goods in holders:
        for g in sorted(goods):
            if not 0 <= g < inst.m:
                agents = () if who is None else (who,)
                return Verdict(False, Witness("good-range", agents, g), label)
            if g in owner:
                agents = tuple(a for a in (owner[g], who) if a is not None)
                return Verdict(False, Witness("duplicate-good", agents, g), label)
            owner[g] = who
    for g in range(inst.m):
        if g not in owner:
            return Verdict(False, Witness("missing-good", (), g), label)
    return Verdict(True, None, label)
