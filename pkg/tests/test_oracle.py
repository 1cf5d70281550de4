import pytest
from hypothesis import given, settings, strategies as st

from sqrtefx.errors import BudgetExceededError
from sqrtefx.model import Instance
from sqrtefx.oracle import best_alpha_squared, exists_efx_extension
from sqrtefx.two_agent import TwoAgentProblem
from sqrtefx.verify import efx_factor_squared, ratio_lt

from strategies import instances


def test_two_agents_one_good():
    ratio, alloc = best_alpha_squared(Instance.from_dense([[1], [1]]))
    assert ratio == (1, 0)
    assert alloc == {0: frozenset({0}), 1: frozenset()}


def test_worked_example_is_efx_achievable(worked):
    ratio, alloc = best_alpha_squared(worked)
    assert not ratio_lt(ratio, (1, 1))
    assert efx_factor_squared(worked, alloc) == ratio


def test_budget():
    with pytest.raises(BudgetExceededError):
        best_alpha_squared(Instance.from_dense([[1] * 10, [1] * 10]), budget=1000)


def test_extension_exists_simple(worked):
    assert exists_efx_extension(TwoAgentProblem(worked, 0, 1, {1}, {0}, {3}))


@settings(max_examples=80, deadline=None)
@given(instances(max_n=3, max_m=6), st.data())
def test_argmax(inst, data):
    best, alloc = best_alpha_squared(inst)
    owners = data.draw(st.lists(st.integers(0, inst.n - 1), min_size=inst.m, max_size=inst.m))
    other = {i: frozenset(g for g, o in enumerate(owners) if o == i) for i in range(inst.n)}
    assert not ratio_lt(best, efx_factor_squared(inst, other))
    assert efx_factor_squared(inst, alloc) == best
