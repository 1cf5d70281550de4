"""Weighted envy graph over the remaining agents.

Edge weights are kept as integer pairs ``(num, den)`` meaning
``v_from(X_to) / v_from(X_from)``. Threshold tests cross-multiply, and the
1/sqrt(2) test squares both (nonnegative) sides, so every answer is exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import StructureError
from .model import AllocationState, Instance


class Threshold(str, enum.Enum):
    ZERO = "zero"
    ONE = "one"
    INV_SQRT2 = "inv-sqrt2"


class CycleKind(str, enum.Enum):
    HEAVY = "homogeneous-heavy"
    LIGHT = "homogeneous-light"
    MIXED = "heterogeneous"


@dataclass(frozen=True)
class EnvyEdge:
    source: int
    target: int
    num: int
    den: int

    def weight(self):
        """Exact weight as a Fraction, or ``float('inf')`` when den == 0 < num."""
        if self.den == 0:
            return float("inf") if self.num > 0 else Fraction(0)
        return Fraction(self.num, self.den)


def in_g_alpha(e: EnvyEdge, alpha: Threshold | str) -> bool:
    """Whether the edge has weight strictly above ``alpha``.

    A zero own-value with positive num is an infinite weight and passes
    every threshold; ``(0, 0)`` passes none.
    """
    alpha = Threshold(alpha)
    if e.num <= 0:
        return False
    if e.den == 0:
        return True
    if alpha is Threshold.ZERO:
        return True
    if alpha is Threshold.ONE:
        return e.num > e.den
    return 2 * e.num * e.num > e.den * e.den


def is_heavy(e: EnvyEdge) -> bool:
    return in_g_alpha(e, Threshold.INV_SQRT2)


@dataclass(frozen=True)
class EnvyGraph:
    agents: tuple
    edges: dict  # (i, j) -> EnvyEdge for every ordered pair i != j

    def edge(self, i: int, j: int) -> EnvyEdge:
        return self.edges[(i, j)]

    def successors(self, i: int, alpha=Threshold.ZERO) -> list:
        return [j for j in self.agents if j != i and in_g_alpha(self.edges[(i, j)], alpha)]

    def predecessors(self, j: int, alpha=Threshold.ZERO) -> list:
        return [i for i in self.agents if i != j and in_g_alpha(self.edges[(i, j)], alpha)]


def build_graph(inst: Instance, st: AllocationState) -> EnvyGraph:
    agents = tuple(st.remaining)
    own = {i: inst.v(i, st.bundles_remaining[i]) for i in agents}
    edges = {}
    for i in agents:
        for j in agents:
            if i != j:
                edges[(i, j)] = EnvyEdge(i, j, inst.v(i, st.bundles_remaining[j]), own[i])
    return EnvyGraph(agents, edges)


@dataclass(frozen=True)
class CycleInfo:
    """A directed cycle; ``vertices[t] -> vertices[t + 1]`` are its edges."""

    vertices: tuple
    kind: CycleKind

    def edges(self):
        k = len(self.vertices)
        return [(self.vertices[t], self.vertices[(t + 1) % k]) for t in range(k)]


def _classify(g: EnvyGraph, vertices: tuple) -> CycleKind:
    k = len(vertices)
    heavy = [is_heavy(g.edge(vertices[t], vertices[(t + 1) % k])) for t in range(k)]
    if all(heavy):
        return CycleKind.HEAVY
    if not any(heavy):
        return CycleKind.LIGHT
    return CycleKind.MIXED


def decompose_cycles(g: EnvyGraph) -> list:
    """Split the positive-weight subgraph into its vertex-disjoint cycles.

    Raises StructureError if some vertex does not have exactly one outgoing
    and one incoming positive edge.
    """
    succ = {}
    indeg = {v: 0 for v in g.agents}
    for i in g.agents:
        out = g.successors(i)
        if len(out) != 1:
            raise StructureError(f"agent {i} has out-degree {len(out)} in G_0")
        succ[i] = out[0]
        indeg[out[0]] += 1
    for v, d in indeg.items():
        if d != 1:
            raise StructureError(f"agent {v} has in-degree {d} in G_0")

    cycles = []
    seen = set()
    for start in sorted(g.agents):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        v = succ[start]
        while v != start:
            cyc.append(v)
            seen.add(v)
            v = succ[v]
        cycles.append(CycleInfo(tuple(cyc), _classify(g, tuple(cyc))))
    return cycles


def find_heavy_light_triple(c: CycleInfo, g: EnvyGraph) -> tuple:
    """First ``(i, j, k)`` along the cycle with i->j heavy and j->k light."""
    if c.kind is not CycleKind.MIXED:
        raise ValueError(f"cycle {c.vertices} is {c.kind.value}, not heterogeneous")
    vs = c.vertices
    k = len(vs)
    for t in range(k):
        a, b, d = vs[t], vs[(t + 1) % k], vs[(t + 2) % k]
        if is_heavy(g.edge(a, b)) and not is_heavy(g.edge(b, d)):
            return a, b, d
    raise StructureError(f"heterogeneous cycle {vs} has no heavy-light seam")
