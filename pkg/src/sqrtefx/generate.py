"""Seeded random (2, inf)-bounded instances: agents as vertices, goods as edges or loops."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GenerationError
from .model import Instance


@dataclass(frozen=True)
class GenConfig:
    n: int
    m: int
    value_max: int = 100
    share_prob: float = 0.8
    q_cap: int | None = None  # max goods shared by any one pair of agents
    seed: int = 0


def generate(cfg: GenConfig) -> Instance:
    """Draw an instance; identical configs give identical instances.

    Every good gets one uniform agent with a uniform value in
    ``[1, value_max]``; with probability ``share_prob`` it also gets a second,
    distinct agent. Pairs already at ``q_cap`` are rejected and redrawn.
    """
    if cfg.n < 1 or cfg.m < cfg.n:
        raise GenerationError(f"need n >= 1 and m >= n, got n={cfg.n}, m={cfg.m}")
    if cfg.value_max < 1:
        raise GenerationError("value_max must be at least 1")
    if not 0.0 <= cfg.share_prob <= 1.0:
        raise GenerationError("share_prob must lie in [0, 1]")
    pairs_total = cfg.n * (cfg.n - 1) // 2
    if cfg.q_cap is not None:
        if cfg.q_cap < 0:
            raise GenerationError("q_cap must be nonnegative")
        if cfg.share_prob == 1.0 and cfg.n > 1 and cfg.m > cfg.q_cap * pairs_total:
            raise GenerationError(
                f"every good must be shared but {pairs_total} pairs with cap {cfg.q_cap} "
                f"hold at most {cfg.q_cap * pairs_total} goods < m={cfg.m}")

    rng = np.random.default_rng(cfg.seed)
    shared = {}
    goods = []
    for g in range(cfg.m):
        if cfg.n > 1 and rng.random() < cfg.share_prob:
            if cfg.q_cap is not None and sum(shared.values()) >= cfg.q_cap * pairs_total:
                raise GenerationError(f"all agent pairs reached q_cap={cfg.q_cap} at good {g}")
            while True:
                a, b = (int(x) for x in rng.choice(cfg.n, size=2, replace=False))
                key = (min(a, b), max(a, b))
                if cfg.q_cap is None or shared.get(key, 0) < cfg.q_cap:
                    break
            shared[key] = shared.get(key, 0) + 1
            va, vb = (int(x) for x in rng.integers(1, cfg.value_max, size=2, endpoint=True))
            goods.append(((a, va), (b, vb)))
        else:
            a = int(rng.integers(cfg.n))
            goods.append(((a, int(rng.integers(1, cfg.value_max, endpoint=True))),))
    return Instance(cfg.n, cfg.m, tuple(goods))


def pair_share_counts(inst: Instance) -> dict:
    """Number of goods each agent pair has in common."""
    counts = {}
    for entries in inst.valuation:
        if len(entries) == 2:
            key = (entries[0][0], entries[1][0])
            counts[key] = counts.get(key, 0) + 1
    return counts


def random_family(count: int, seed: int, n_range=(1, 8), m_range=None, value_max=100,
                  share_prob=0.8, q_cap=None):
    """Yield ``count`` instances with n and m drawn per instance.

    ``m_range`` defaults to ``(n, 20)``; its lower end is raised to n.
    Instance k depends only on (seed, k).
    """
    root = np.random.SeedSequence(seed)
    for k, child in enumerate(root.spawn(count)):
        rng = np.random.default_rng(child)
        n = int(rng.integers(n_range[0], n_range[1], endpoint=True))
        lo, hi = m_range if m_range is not None else (n, 20)
        m = int(rng.integers(max(lo, n), max(hi, n), endpoint=True))
        sub_seed = int(rng.integers(0, 2 ** 63))
        yield k, generate(GenConfig(n, m, value_max, share_prob, q_cap, sub_seed))
