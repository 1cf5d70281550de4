import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from sqrtefx.errors import InvalidInstanceError
from sqrtefx.matching import LogWeight, assignment_score, hungarian_min, nash_assignment
from sqrtefx.model import Instance

from strategies import instances


def brute_best(inst):
    return max(assignment_score(inst, list(p)) for p in itertools.permutations(range(inst.m), inst.n))


def test_worked_example(worked):
    assert nash_assignment(worked) == [1, 0, 2]


def test_one_agent_two_goods():
    assert nash_assignment(Instance.from_dense([[1, 7]])) == [1]


def test_positive_count_beats_product():
    # agent 0 alone could get 100, but then agent 1 gets nothing it values
    inst = Instance.from_dense([[100, 1], [5, 0]])
    assert assignment_score(inst, nash_assignment(inst)) == (2, 5)


def test_fewer_goods_than_agents():
    with pytest.raises(InvalidInstanceError):
        nash_assignment(Instance.from_dense([[1], [1]]))


def test_logweight_order():
    assert LogWeight(1, Fraction(1, 1000)) > LogWeight(0, Fraction(10 ** 9))
    assert LogWeight(2, Fraction(6)) == LogWeight.of_value(2) + LogWeight.of_value(3)
    assert LogWeight.of_value(0) == LogWeight()
    assert -LogWeight.of_value(4) < LogWeight()


def test_hungarian_plain_numbers():
    assert hungarian_min([[4, 1, 3], [2, 0, 5], [3, 2, 2]]) in ([1, 0, 2],)


@settings(max_examples=300, deadline=None)
@given(instances(max_n=5, max_m=7))
def test_matches_brute_force(inst):
    goods = nash_assignment(inst)
    assert len(set(goods)) == inst.n
    assert assignment_score(inst, goods) == brute_best(inst)
