import pytest
from hypothesis import assume, given, settings, strategies as st

from sqrtefx.errors import DomainError
from sqrtefx.model import Instance
from sqrtefx.oracle import exists_efx_extension
from sqrtefx.two_agent import TwoAgentProblem, complete_two_agent
from sqrtefx.verify import Alpha, is_alpha_efx

from conftest import A1, A2, G1, G2, G4


def _check(p, ya, yb):
    inst = p.inst
    assert ya | yb == p.xa | p.xb | p.pool and not ya & yb
    assert inst.v(p.a, ya) >= inst.v(p.a, p.xa) and inst.v(p.b, yb) >= inst.v(p.b, p.xb)
    assert is_alpha_efx(inst, {p.a: ya, p.b: yb}, Alpha.ONE).ok


def test_worked_example_pair(worked):
    p = TwoAgentProblem(worked, A1, A2, {G2}, {G1}, {G4})
    assert complete_two_agent(p) == ({G2}, {G1, G4})


def test_empty_pool_unchanged():
    inst = Instance.from_dense([[3, 1], [1, 3]])
    p = TwoAgentProblem(inst, 0, 1, {0}, {1}, set())
    assert complete_two_agent(p) == ({0}, {1})


def test_goods_nobody_wants():
    inst = Instance.from_dense([[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 5, 5]])
    p = TwoAgentProblem(inst, 0, 1, {0}, {1}, {2, 3})
    _check(p, *complete_two_agent(p))


def test_needs_rearrangement():
    # both agents want the same two pool goods much more than what they hold
    inst = Instance.from_dense([[1, 0, 10, 10], [0, 1, 10, 10]])
    p = TwoAgentProblem(inst, 0, 1, {0}, {1}, {2, 3})
    _check(p, *complete_two_agent(p))


def test_rejects_overlap():
    inst = Instance.from_dense([[1, 1], [1, 1]])
    with pytest.raises(DomainError):
        TwoAgentProblem(inst, 0, 1, {0}, {0}, {1})
    with pytest.raises(DomainError):
        TwoAgentProblem(inst, 0, 0, {0}, {1}, set())


@st.composite
def problems(draw, max_m=10):
    m = draw(st.integers(1, max_m))
    rows = [[draw(st.integers(0, 20)) for _ in range(m)] for _ in range(2)]
    side = draw(st.lists(st.sampled_from("abp"), min_size=m, max_size=m))
    inst = Instance.from_dense(rows)
    xa = {g for g, s in enumerate(side) if s == "a"}
    xb = {g for g, s in enumerate(side) if s == "b"}
    pool = {g for g, s in enumerate(side) if s == "p"}
    return TwoAgentProblem(inst, 0, 1, xa, xb, pool)


@settings(max_examples=300, deadline=None)
@given(problems())
def test_completion_postconditions(p):
    assume(p.is_partial_efx())
    _check(p, *complete_two_agent(p))


@settings(max_examples=150, deadline=None)
@given(problems(max_m=8))
def test_oracle_agrees_extension_exists(p):
    assume(p.is_partial_efx())
    assert exists_efx_extension(p)
