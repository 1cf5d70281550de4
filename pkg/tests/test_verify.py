import pytest
from hypothesis import given, settings, strategies as st

from sqrtefx.engine import basic_feasible_allocation
from sqrtefx.errors import DomainError
from sqrtefx.model import Instance, Verdict, Witness
from sqrtefx.verify import (Alpha, Beta, efx_factor_squared, is_alpha_efx, ratio_lt, reduce_ratio,
                            replay_witness, strongly_envies, check_properties)

from conftest import A1, A2, A3, G1, G2, G3, G4, make_state
from strategies import instances

PARTIAL = {A1: frozenset({G2, G3}), A2: frozenset({G1}), A3: frozenset({G4})}


class TestWorkedPartialAllocation:
    def test_half_sqrt_efx(self, worked):
        assert is_alpha_efx(worked, PARTIAL, Alpha.INV_SQRT2).ok

    def test_not_efx(self, worked):
        v = is_alpha_efx(worked, PARTIAL, Alpha.ONE)
        assert not v.ok
        assert v.witness.agents == (A3, A1) and v.witness.good == G2
        assert (v.witness.lhs, v.witness.rhs) == (9, 16)

    def test_factor(self, worked):
        assert efx_factor_squared(worked, PARTIAL) == (9, 16)

    def test_strongly_envies(self, worked):
        assert not strongly_envies(worked, A3, {G4}, A1, {G2, G3}, Beta.ONE).ok
        assert strongly_envies(worked, A3, {G4}, A1, {G2, G3}, Beta.SQRT2).ok

    def test_squared_alpha_tuple(self, worked):
        assert is_alpha_efx(worked, PARTIAL, (9, 16)).ok
        assert not is_alpha_efx(worked, PARTIAL, (10, 16)).ok


class TestEdgeCases:
    def test_empty_other_bundle(self):
        inst = Instance.from_dense([[1, 1], [1, 1]])
        assert strongly_envies(inst, 0, frozenset({0, 1}), 1, frozenset()).ok

    def test_single_good_never_envied(self):
        inst = Instance.from_dense([[0, 9], [1, 0]])
        assert is_alpha_efx(inst, {0: frozenset({0}), 1: frozenset({1})}, Alpha.ONE).ok

    def test_same_agent(self, worked):
        with pytest.raises(DomainError):
            strongly_envies(worked, 0, set(), 0, {1})

    def test_overlap(self, worked):
        with pytest.raises(DomainError):
            is_alpha_efx(worked, {0: frozenset({1}), 1: frozenset({1})})

    def test_out_of_range(self, worked):
        with pytest.raises(DomainError):
            is_alpha_efx(worked, {5: frozenset()})

    def test_infinite_factor(self):
        inst = Instance.from_dense([[1], [1]])
        assert efx_factor_squared(inst, {0: frozenset({0}), 1: frozenset()}) == (1, 0)

    def test_ratios(self):
        assert reduce_ratio(6, 8) == (3, 4) and reduce_ratio(0, 5) == (0, 1)
        assert reduce_ratio(3, 0) == (1, 0)
        assert ratio_lt((1, 2), (1, 0)) and not ratio_lt((1, 0), (5, 1))


class TestProperties:
    def test_labels(self, worked):
        vs = check_properties(worked, basic_feasible_allocation(worked))
        assert [v.label for v in vs] == [f"property-{r}" for r in ("i", "ii", "iii", "iv", "v")]
        assert all(v.ok for v in vs)

    def test_property_ii_violation(self, worked):
        # agent 3 finalized with g3 (4); the rest holds g4 (3) and g2 (0): 2*16 >= 9, fine
        # but finalized with nothing while g3 and g4 are unfinalized: violation
        st = make_state(worked, {A1: {G2}, A2: {G1}}, final={A3: set()})
        v = check_properties(worked, st)[1]
        assert not v.ok and v.witness.agents == (A3,)

    def test_property_v_violation(self, worked):
        # agent 1 holding g1 (shared with 2) and g3 (shared with 3)
        st = make_state(worked, {A1: {G1, G3}, A2: {G2}, A3: {G4}})
        assert not check_properties(worked, st)[4].ok


class TestVerdict:
    def test_witness_round_trip(self):
        w = Witness("strong-envy:one", (2, 0), 1, 9, 16)
        v = Verdict(False, w, "efx")
        assert Verdict.from_dict(v.to_dict()) == v
        assert replay_witness(w)

    def test_ok_verdict_has_no_witness(self):
        with pytest.raises(ValueError):
            Verdict(True, Witness("x"))


def _random_alloc(inst, data):
    owners = data.draw(st.lists(st.integers(0, inst.n - 1), min_size=inst.m, max_size=inst.m))
    return {i: frozenset(g for g, o in enumerate(owners) if o == i) for i in range(inst.n)}


@settings(max_examples=300, deadline=None)
@given(instances(), st.data())
def test_efx_implies_half_sqrt_efx(inst, data):
    alloc = _random_alloc(inst, data)
    if is_alpha_efx(inst, alloc, Alpha.ONE).ok:
        assert is_alpha_efx(inst, alloc, Alpha.INV_SQRT2).ok


@settings(max_examples=300, deadline=None)
@given(instances(), st.data())
def test_factor_agrees_with_check(inst, data):
    alloc = _random_alloc(inst, data)
    f = efx_factor_squared(inst, alloc)
    if f[1]:
        assert is_alpha_efx(inst, alloc, f).ok
        assert not is_alpha_efx(inst, alloc, (f[0] + 1, f[1])).ok if f[0] else True
    assert is_alpha_efx(inst, alloc, Alpha.ONE).ok == (not ratio_lt(f, (1, 1)))
    assert is_alpha_efx(inst, alloc, Alpha.INV_SQRT2).ok == (not ratio_lt(f, (1, 2)))


@settings(max_examples=200, deadline=None)
@given(instances(), st.data())
def test_witness_replays(inst, data):
    v = is_alpha_efx(inst, _random_alloc(inst, data), Alpha.ONE)
    if not v.ok:
        assert replay_witness(v.witness)
