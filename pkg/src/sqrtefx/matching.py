"""Maximum-weight one-good-per-agent assignment with exact Nash-welfare weights.

The objective is lexicographic: first the number of agents matched to a good
they value, then the product of those values. Both parts live in the ordered
abelian group (Z, +) x (Q>0, *), so the Hungarian method runs on it directly
with no logarithms and no floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from .errors import InvalidInstanceError
from .model import Instance


@total_ordering
class LogWeight:
    """Element ``(count, ratio)`` standing for ``count * BIG + log(ratio)``."""

    __slots__ = ("count", "ratio")

    def __init__(self, count=0, ratio=Fraction(1)):
        self.count = count
        self.ratio = Fraction(ratio)

    def __add__(self, other):
        return LogWeight(self.count + other.count, self.ratio * other.ratio)

    def __neg__(self):
        return LogWeight(-self.count, 1 / self.ratio)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return self.count == other.count and self.ratio == other.ratio

    def __lt__(self, other):
        return (self.count, self.ratio) < (other.count, other.ratio)

    def __hash__(self):
        return hash((self.count, self.ratio))

    def __repr__(self):
        return f"LogWeight({self.count}, {self.ratio})"

    @classmethod
    def of_value(cls, v: int) -> "LogWeight":
        return cls(1, Fraction(v)) if v > 0 else cls(0, Fraction(1))


def hungarian_min(cost) -> list:
    """Minimum-cost assignment of every row to a distinct column.

    ``cost`` is an n-by-m table (n <= m) of group elements supporting ``+``,
    ``-`` and ``<``. Returns ``col_of_row``. Classic O(n^2 m) potentials form.
    """
    n = len(cost)
    m = len(cost[0]) if n else 0
    if n > m:
        raise ValueError("need at least as many columns as rows")
    zero = cost[0][0] - cost[0][0] if n else None
    u = [zero] * (n + 1)
    v = [zero] * (m + 1)
    p = [0] * (m + 1)  # p[j]: row matched to column j (1-based), 0 = free
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [None] * (m + 1)  # None is +inf
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = None
            j1 = -1
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] = u[p[j]] + delta
                    v[j] = v[j] - delta
                else:
                    minv[j] = minv[j] - delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    col_of_row = [0] * n
    for j in range(1, m + 1):
        if p[j]:
            col_of_row[p[j] - 1] = j - 1
    return col_of_row


def nash_assignment(inst: Instance) -> list:
    """Good assigned to each agent, maximizing (positive count, product)."""
    if inst.m < inst.n:
        raise InvalidInstanceError(f"need m >= n, got n={inst.n}, m={inst.m}")
    cost = [[-LogWeight.of_value(inst.value(i, g)) for g in range(inst.m)]
            for i in range(inst.n)]
    return hungarian_min(cost)


def assignment_score(inst: Instance, goods: list) -> tuple:
    """``(positive count, product of positive values)`` of an assignment."""
    count, prod = 0, 1
    for i, g in enumerate(goods):
        val = inst.value(i, g)
        if val > 0:
            count += 1
            prod *= val
    return count, prod
