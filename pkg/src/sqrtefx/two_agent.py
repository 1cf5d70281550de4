"""Extend a two-agent partial EFX allocation to all goods without lowering either utility.

Existence is guaranteed for two agents, so the search below is complete:
a cheap insertion pass first, then placements of the relevant pool goods on
top of the current bundles, then every split of all relevant goods. Goods
neither agent values are kept aside and attached to whichever side leaves
the pair EFX.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TheoremViolationError
from .model import Instance
from .verify import Alpha, is_alpha_efx

_CHUNK = 1 << 15


@dataclass(frozen=True)
class TwoAgentProblem:
    inst: Instance
    a: int
    b: int
    xa: frozenset
    xb: frozenset
    pool: frozenset

    def __post_init__(self):
        if self.a == self.b:
            raise DomainError("two-agent problem needs distinct agents")
        for name in ("xa", "xb", "pool"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.xa & self.xb or self.xa & self.pool or self.xb & self.pool:
            raise DomainError("bundles and pool must be pairwise disjoint")

    def is_partial_efx(self) -> bool:
        return is_alpha_efx(self.inst, {self.a: self.xa, self.b: self.xb}, Alpha.ONE).ok


def _pair_efx(inst, a, b, ya, yb) -> bool:
    for i, own, other in ((a, ya, yb), (b, yb, ya)):
        if len(other) < 1:
            continue
        mine = inst.v(i, own)
        rest = inst.v(i, other) - min(inst.value(i, g) for g in other)
        if mine < rest:
            return False
    return True


def _greedy(p: TwoAgentProblem, loose: list, zero: frozenset):
    inst, a, b = p.inst, p.a, p.b
    ya, yb = set(p.xa), set(p.xb)
    for g in loose:
        va, vb = inst.value(a, g), inst.value(b, g)
        # most-valued side first; on ties try a first
        order = (a, b) if va >= vb else (b, a)
        for owner in order:
            if inst.value(owner, g) == 0:
                continue
            cand_a = ya | {g} if owner == a else ya
            cand_b = yb | {g} if owner == b else yb
            if _pair_efx(inst, a, b, cand_a, cand_b):
                ya, yb = cand_a, cand_b
                break
        else:
            return None
    return _attach_zero(inst, a, b, frozenset(ya), frozenset(yb), zero)


def _attach_zero(inst, a, b, ya, yb, zero):
    if not zero:
        return (ya, yb) if _pair_efx(inst, a, b, ya, yb) else None
    for za, zb in ((ya | zero, yb), (ya, yb | zero)):
        if _pair_efx(inst, a, b, za, zb):
            return za, zb
    return None


def _split_search(inst, a, b, fixed_a, fixed_b, free, floor_a, floor_b, zero):
    """First bitmask split of ``free`` (bit set -> b) satisfying all constraints.

    ``fixed_a``/``fixed_b`` always stay with their side. Vectorized over
    masks in chunks; exact because all values are Python-int-safe int64 or
    object arrays.
    """
    t = len(free)
    free = list(free)
    fa, fb = sorted(fixed_a), sorted(fixed_b)
    va = [inst.value(a, g) for g in free]
    vb = [inst.value(b, g) for g in free]
    total = sum(va) + sum(vb) + inst.v(a, fa) + inst.v(b, fb) + inst.v(a, fb) + inst.v(b, fa)
    dtype = np.int64 if total * total < (1 << 62) else object
    va_arr = np.array(va, dtype=dtype)
    vb_arr = np.array(vb, dtype=dtype)
    a_fa, a_fb = inst.v(a, fa), inst.v(a, fb)
    b_fa, b_fb = inst.v(b, fa), inst.v(b, fb)
    # least single-good value on each fixed side, as seen by the other agent
    big = total + 1
    min_a_in_fb = min((inst.value(a, g) for g in fb), default=big)
    min_b_in_fa = min((inst.value(b, g) for g in fa), default=big)
    shifts = np.arange(t, dtype=np.int64)
    for start in range(0, 1 << t, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << t), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(bool)
        to_b = bits.astype(dtype)
        to_a = (~bits).astype(dtype)
        ua = a_fa + to_a @ va_arr          # v_a(ya)
        ub = b_fb + to_b @ vb_arr          # v_b(yb)
        a_sees_b = a_fb + to_b @ va_arr    # v_a(yb)
        b_sees_a = b_fa + to_a @ vb_arr    # v_b(ya)
        min_a_b = np.minimum(np.where(bits, va_arr, big).min(axis=1, initial=big), min_a_in_fb)
        min_b_a = np.minimum(np.where(~bits, vb_arr, big).min(axis=1, initial=big), min_b_in_fa)
        size_b = bits.sum(axis=1) + len(fb)
        size_a = (~bits).sum(axis=1) + len(fa)
        ok = (ua >= floor_a) & (ub >= floor_b)
        # EFX with zero goods kept aside; attaching them is decided per candidate
        a_ok = (size_b == 0) | (ua >= a_sees_b - np.where(size_b > 0, min_a_b, 0))
        b_ok = (size_a == 0) | (ub >= b_sees_a - np.where(size_a > 0, min_b_a, 0))
        cand = np.nonzero(ok & a_ok & b_ok)[0]
        for idx in cand:
            mask = int(masks[idx])
            ya = frozenset(fa) | frozenset(g for k, g in enumerate(free) if not mask >> k & 1)
            yb = frozenset(fb) | frozenset(g for k, g in enumerate(free) if mask >> k & 1)
            res = _attach_zero(inst, a, b, ya, yb, zero)
            if res is not None:
                return res
    return None


def complete_two_agent(p: TwoAgentProblem) -> tuple:
    """Return ``(ya, yb)`` covering ``xa | xb | pool``, EFX, utilities not lowered.

    >>> inst = Instance.from_dense([[2, 3, 0], [8, 3, 4]])
    >>> complete_two_agent(TwoAgentProblem(inst, 0, 1, {1}, {0}, {2}))
    (frozenset({1}), frozenset({0, 2}))
    """
    inst, a, b = p.inst, p.a, p.b
    if not p.pool and _pair_efx(inst, a, b, p.xa, p.xb):
        return p.xa, p.xb
    floor_a, floor_b = inst.v(a, p.xa), inst.v(b, p.xb)
    zero = frozenset(g for g in p.pool if inst.value(a, g) == 0 and inst.value(b, g) == 0)
    loose = sorted(p.pool - zero)

    res = _greedy(p, loose, zero)
    if res is None:
        res = _split_search(inst, a, b, p.xa, p.xb, loose, floor_a, floor_b, zero)
    if res is None:
        everything = sorted(p.xa | p.xb | frozenset(loose))
        res = _split_search(inst, a, b, (), (), everything, floor_a, floor_b, zero)
    if res is None:
        raise TheoremViolationError(
            f"no EFX completion for agents {a},{b} with bundles {sorted(p.xa)}, "
            f"{sorted(p.xb)} and pool {sorted(p.pool)}")
    ya, yb = res
    if (not is_alpha_efx(inst, {a: ya, b: yb}, Alpha.ONE).ok
            or inst.v(a, ya) < floor_a or inst.v(b, yb) < floor_b
            or ya | yb != p.xa | p.xb | p.pool or ya & yb):
        raise TheoremViolationError("completion failed its own postcondition")
    return ya, yb
