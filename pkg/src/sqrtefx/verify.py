"""Exact envy, strong-envy and alpha-EFX checks, plus the five maintained properties.

Every check compares squared integers. A strong-envy witness drops the good
of the rival bundle that the envier values least (ties: smallest good id),
which is the removal that leaves the most value behind.
"""

from __future__ import annotations

import enum
from math import gcd
from typing import Mapping

from .errors import DomainError
from .model import AllocationState, Instance, Verdict, Witness

INFINITE = (1, 0)


class Beta(str, enum.Enum):
    ONE = "one"
    SQRT2 = "sqrt2"


class Alpha(str, enum.Enum):
    ONE = "one"
    INV_SQRT2 = "inv-sqrt2"


# beta^2 as (p, q); the strong-envy test is p * own^2 < q * rest^2
_BETA_SQ = {Beta.ONE: (1, 1), Beta.SQRT2: (2, 1)}
_ALPHA_TO_BETA = {Alpha.ONE: Beta.ONE, Alpha.INV_SQRT2: Beta.SQRT2}


def reduce_ratio(num: int, den: int) -> tuple:
    """Canonical form of a nonnegative ratio; ``(1, 0)`` is infinity."""
    if den == 0:
        return INFINITE
    if num == 0:
        return (0, 1)
    d = gcd(num, den)
    return (num // d, den // d)


def ratio_lt(a: tuple, b: tuple) -> bool:
    """``a < b`` for nonnegative ratios where den == 0 means infinity."""
    if a[1] == 0:
        return False
    if b[1] == 0:
        return True
    return a[0] * b[1] < b[0] * a[1]


def _least_valued(inst: Instance, i: int, goods) -> int:
    return min(goods, key=lambda g: (inst.value(i, g), g))


def _strong_envy(inst, i, xi, j, xj, p, q, kind):
    if not xj:
        return Verdict(True)
    g = _least_valued(inst, i, xj)
    own = inst.v(i, xi)
    rest = inst.v(i, xj) - inst.value(i, g)
    lhs, rhs = p * own * own, q * rest * rest
    if lhs < rhs:
        return Verdict(False, Witness(kind, (i, j), g, lhs, rhs))
    return Verdict(True)


def strongly_envies(inst: Instance, i: int, xi, j: int, xj, beta: Beta | str = Beta.ONE) -> Verdict:
    """Does ``i`` (holding ``xi``) beta-strongly envy ``j`` (holding ``xj``)?

    Returns a failing Verdict with the witness good when it does. Note the
    inverted sense: ``ok`` means *no* strong envy.

    >>> inst = Instance.from_dense([[1, 1], [1, 1]])
    >>> strongly_envies(inst, 0, frozenset(), 1, frozenset({0, 1})).ok
    False
    """
    if i == j:
        raise DomainError("strong envy needs two distinct agents")
    p, q = _BETA_SQ[Beta(beta)]
    return _strong_envy(inst, i, xi, j, xj, p, q, f"strong-envy:{Beta(beta).value}")


def _check_disjoint(inst: Instance, alloc: Mapping[int, frozenset]) -> None:
    seen = set()
    for i, b in alloc.items():
        if not 0 <= i < inst.n:
            raise DomainError(f"agent {i} out of range")
        for g in b:
            if not 0 <= g < inst.m:
                raise DomainError(f"good {g} out of range")
            if g in seen:
                raise DomainError(f"good {g} appears in two bundles")
            seen.add(g)


def is_alpha_efx(inst: Instance, alloc: Mapping[int, frozenset], alpha=Alpha.INV_SQRT2) -> Verdict:
    """Check alpha-EFX over the agents present in ``alloc``.

    ``alpha`` is ``Alpha.ONE``, ``Alpha.INV_SQRT2`` (or their string tags), or
    a squared factor ``(num, den)`` meaning alpha^2 = num/den.
    """
    _check_disjoint(inst, alloc)
    if isinstance(alpha, tuple):
        a_num, a_den = alpha
        # beta^2 = 1 / alpha^2 = a_den / a_num
        p, q, kind = a_den, a_num, f"strong-envy:alpha2={a_num}/{a_den}"
    else:
        beta = _ALPHA_TO_BETA[Alpha(alpha)]
        (p, q), kind = _BETA_SQ[beta], f"strong-envy:{beta.value}"
    agents = sorted(alloc)
    for i in agents:
        for j in agents:
            if i != j:
                v = _strong_envy(inst, i, alloc[i], j, alloc[j], p, q, kind)
                if not v.ok:
                    return Verdict(False, v.witness, "efx")
    return Verdict(True, None, "efx")


def efx_factor_squared(inst: Instance, alloc: Mapping[int, frozenset]) -> tuple:
    """Largest alpha^2 for which ``alloc`` is alpha-EFX, as an exact ratio.

    Minimum over ordered pairs of ``v_i(X_i)^2 / max_g v_i(X_j - g)^2`` with
    zero denominators skipped; ``(1, 0)`` when every pair is skipped.
    """
    best = INFINITE
    agents = sorted(alloc)
    for i in agents:
        own = inst.v(i, alloc[i])
        for j in agents:
            if i == j or not alloc[j]:
                continue
            rest = inst.v(i, alloc[j]) - min(inst.value(i, g) for g in alloc[j])
            if rest == 0:
                continue
            cand = (own * own, rest * rest)
            if ratio_lt(cand, best):
                best = cand
    return reduce_ratio(*best)


def replay_witness(w: Witness) -> bool:
    """True when the witness operands still show a violation."""
    return w.lhs is not None and w.rhs is not None and w.lhs < w.rhs


def check_properties(inst: Instance, st: AllocationState) -> list:
    """Verdicts for the five properties the algorithm maintains, in order.

    (i)   finalized bundles are 1/sqrt(2)-EFX among finalized agents;
    (ii)  each finalized agent values its bundle at least 1/sqrt(2) of
          everything still unfinalized (remaining bundles plus pool);
    (iii) remaining bundles are EFX among remaining agents;
    (iv)  no remaining agent strongly envies a finalized bundle;
    (v)   each remaining bundle is relevant only to its holder and at most
          one fixed other agent.
    """
    out = []

    v = is_alpha_efx(inst, st.bundles_final, Alpha.INV_SQRT2)
    out.append(Verdict(v.ok, v.witness, "property-i"))

    unfinal = set(st.pool)
    for b in st.bundles_remaining.values():
        unfinal |= b
    wit = None
    for i in st.finalized:
        own = inst.v(i, st.bundles_final[i])
        rest = inst.v(i, unfinal)
        if 2 * own * own < rest * rest:
            wit = Witness("sqrt2-envy-of-union", (i,), None, 2 * own * own, rest * rest)
            break
    out.append(Verdict(wit is None, wit, "property-ii"))

    v = is_alpha_efx(inst, st.bundles_remaining, Alpha.ONE)
    out.append(Verdict(v.ok, v.witness, "property-iii"))

    wit = None
    for i in st.remaining:
        for j in st.finalized:
            s = _strong_envy(inst, i, st.bundles_remaining[i], j, st.bundles_final[j],
                             1, 1, "strong-envy:one")
            if not s.ok:
                wit = s.witness
                break
        if wit:
            break
    out.append(Verdict(wit is None, wit, "property-iv"))

    wit = None
    for i in st.remaining:
        partner = None
        for g in sorted(st.bundles_remaining[i]):
            others = [a for a in inst.agents_of(g) if a != i]
            if partner is None and others:
                partner = others[0]
            if any(a != partner for a in others):
                wit = Witness("single-type", (i, partner, others[0]), g)
                break
        if wit:
            break
    out.append(Verdict(wit is None, wit, "property-v"))
    return out
