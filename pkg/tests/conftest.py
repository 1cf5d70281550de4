import pytest

from sqrtefx.model import AllocationState, Instance

# The worked three-agent example, 0-based: agent k -> k-1, good g_k -> k-1.
#   g1: a1=2, a2=8   g2: a1=3, a2=3   g3: a1=1, a3=4   g4: a2=4, a3=3
WORKED = [[2, 3, 1, 0],
        [8, 3, 0, 4],
        [0, 0, 4, 3]]
G1, G2, G3, G4 = 0, 1, 2, 3
A1, A2, A3 = 0, 1, 2


@pytest.fixture
def worked():
    return Instance.from_dense(WORKED)


def make_state(inst, remaining, final=None, pool=None, last=None):
    """Hand-built state; ``remaining``/``final`` map agent -> goods."""
    final = final or {}
    held = set()
    for b in list(remaining.values()) + list(final.values()):
        held |= set(b)
    if pool is None:
        pool = set(range(inst.m)) - held
    st = AllocationState(sorted(remaining), list(final),
                         {i: frozenset(b) for i, b in remaining.items()},
                         {i: frozenset(b) for i, b in final.items()},
                         frozenset(pool), last if last is not None else (list(final)[-1] if final else None))
    return st


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def cycle_instance(nums, den=10, extra=()):
    """Agents 0..k-1 on the cycle t -> t+1 with weight nums[t]/den.

    Good t is held by agent t (worth ``den`` to it) and worth nums[t-1] to its
    predecessor t-1. ``extra`` lists further goods as tuples of (agent, value).
    Returns (instance, state) with the extra goods in the pool.
    """
    k = len(nums)
    goods = [((t, den), ((t - 1) % k, nums[(t - 1) % k])) for t in range(k)]
    goods += [tuple(e) for e in extra]
    n = 1 + max(a for g in goods for a, _ in g)
    inst = Instance(n, len(goods), tuple(goods))
    return inst, make_state(inst, {t: {t} for t in range(k)})
