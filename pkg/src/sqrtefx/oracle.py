"""Brute-force ground truth for tiny instances.

Nothing here shares code with the solver's search paths: allocations and
completions are enumerated outright with itertools and judged with the
verifier.
"""

from __future__ import annotations

import itertools

from .errors import BudgetExceededError
from .model import Instance
from .two_agent import TwoAgentProblem
from .verify import Alpha, INFINITE, efx_factor_squared, is_alpha_efx, ratio_lt

DEFAULT_BUDGET = 2_000_000


def best_alpha_squared(inst: Instance, budget: int = DEFAULT_BUDGET) -> tuple:
    """Best achievable squared EFX factor over all complete allocations.

    Returns ``((num, den), allocation)`` where ``allocation`` is the first
    maximizer in enumeration order (good 0's owner varies slowest, agents in
    id order). ``(1, 0)`` stands for an unbounded factor.
    """
    if inst.n ** inst.m > budget:
        raise BudgetExceededError(f"{inst.n}^{inst.m} allocations exceed budget {budget}")
    best, best_alloc = None, None
    for owners in itertools.product(range(inst.n), repeat=inst.m):
        bundles = [[] for _ in range(inst.n)]
        for g, a in enumerate(owners):
            bundles[a].append(g)
        alloc = {i: frozenset(b) for i, b in enumerate(bundles)}
        f = efx_factor_squared(inst, alloc)
        if best is None or ratio_lt(best, f):
            best, best_alloc = f, alloc
            if f == INFINITE:
                break
    return best, best_alloc


def exists_efx_extension(p: TwoAgentProblem, budget: int = DEFAULT_BUDGET) -> bool:
    """Is there an EFX split of ``xa | xb | pool`` that lowers neither utility?"""
    goods = sorted(p.xa | p.xb | p.pool)
    if 2 ** len(goods) > budget:
        raise BudgetExceededError(f"2^{len(goods)} splits exceed budget {budget}")
    inst, a, b = p.inst, p.a, p.b
    floor_a, floor_b = inst.v(a, p.xa), inst.v(b, p.xb)
    for side in itertools.product((0, 1), repeat=len(goods)):
        ya = frozenset(g for g, s in zip(goods, side) if s == 0)
        yb = frozenset(g for g, s in zip(goods, side) if s == 1)
        if inst.v(a, ya) < floor_a or inst.v(b, yb) < floor_b:
            continue
        if is_alpha_efx(inst, {a: ya, b: yb}, Alpha.ONE).ok:
            return True
    return False
