from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sqrtefx.envy_graph import (CycleInfo, CycleKind, EnvyEdge, Threshold, build_graph,
                                decompose_cycles, find_heavy_light_triple, in_g_alpha)
from sqrtefx.errors import StructureError
from sqrtefx.model import Instance

from conftest import A1, A2, A3, G1, G2, G3, G4, cycle_instance, make_state
from strategies import instances


def test_worked_example_weights(worked):
    st_ = make_state(worked, {A1: {G2, G3}, A2: {G1}, A3: {G4}})
    g = build_graph(worked, st_)
    w = {k: (e.num, e.den) for k, e in g.edges.items()}
    assert w[(A3, A1)] == (4, 3)
    assert w[(A2, A1)] == (3, 8)
    assert w[(A1, A2)] == (2, 4)
    assert w[(A2, A3)] == (4, 8)
    assert g.edge(A3, A1).weight() == Fraction(4, 3)
    # G_1 keeps only the envy edge 3 -> 1
    assert [k for k, e in g.edges.items() if in_g_alpha(e, Threshold.ONE)] == [(A3, A1)]


def test_mutually_irrelevant_bundles():
    inst = Instance.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    g = build_graph(inst, make_state(inst, {0: {0}, 1: {1}, 2: {2}}))
    assert all(e.num == 0 for e in g.edges.values())


def test_single_agent_no_edges(worked):
    g = build_graph(worked, make_state(worked, {A1: {G1}}, final={A2: {G2}, A3: {G3}}))
    assert g.agents == (A1,) and g.edges == {}


class TestThresholds:
    def test_heavy_four_thirds(self):
        assert in_g_alpha(EnvyEdge(0, 1, 4, 3), Threshold.INV_SQRT2)

    def test_three_eighths_not_envy(self):
        assert not in_g_alpha(EnvyEdge(0, 1, 3, 8), Threshold.ONE)

    @pytest.mark.parametrize("alpha", list(Threshold))
    def test_zero_over_zero(self, alpha):
        assert not in_g_alpha(EnvyEdge(0, 1, 0, 0), alpha)

    @pytest.mark.parametrize("alpha", list(Threshold))
    def test_positive_over_zero_is_infinite(self, alpha):
        assert in_g_alpha(EnvyEdge(0, 1, 1, 0), alpha)

    @pytest.mark.parametrize("num, den, heavy", [(7, 10, False), (71, 100, True),
                                                  (707, 1000, False), (708, 1000, True),
                                                  (5, 10, False), (1, 1, True)])
    def test_heavy_boundary(self, num, den, heavy):
        # 1/sqrt(2) = 0.70710678...
        assert in_g_alpha(EnvyEdge(0, 1, num, den), "inv-sqrt2") is heavy

    @given(st.integers(0, 10 ** 6), st.integers(1, 10 ** 6))
    def test_threshold_chain(self, num, den):
        e = EnvyEdge(0, 1, num, den)
        if in_g_alpha(e, Threshold.ONE):
            assert in_g_alpha(e, Threshold.INV_SQRT2)
        if in_g_alpha(e, Threshold.INV_SQRT2):
            assert in_g_alpha(e, Threshold.ZERO)


class TestDecompose:
    def test_two_cycle(self):
        inst = Instance.from_dense([[5, 1], [1, 5]])
        cycles = decompose_cycles(build_graph(inst, make_state(inst, {0: {0}, 1: {1}})))
        assert [c.vertices for c in cycles] == [(0, 1)]

    def test_heterogeneous_three_cycle(self):
        inst, st_ = cycle_instance([9, 5, 8])
        (c,) = decompose_cycles(build_graph(inst, st_))
        assert c.vertices == (0, 1, 2) and c.kind is CycleKind.MIXED

    def test_heavy_four_cycle(self):
        inst, st_ = cycle_instance([9, 9, 9, 9])
        (c,) = decompose_cycles(build_graph(inst, st_))
        assert c.kind is CycleKind.HEAVY and len(c.vertices) == 4

    def test_light_cycle(self):
        inst, st_ = cycle_instance([5, 7, 3])
        assert decompose_cycles(build_graph(inst, st_))[0].kind is CycleKind.LIGHT

    def test_order_and_canonical_start(self):
        # cycles {0, 2} and {1, 3}: goods 0..3 held by agents 0..3
        inst = Instance(4, 4, (((0, 5), (2, 1)), ((1, 5), (3, 1)), ((2, 5), (0, 1)),
                               ((3, 5), (1, 1))))
        cycles = decompose_cycles(build_graph(inst, make_state(inst, {i: {i} for i in range(4)})))
        assert [c.vertices for c in cycles] == [(0, 2), (1, 3)]

    def test_sink_raises(self, worked):
        # agent 3 has no positive out-edge under the basic feasible allocation
        st_ = make_state(worked, {A1: {G2}, A2: {G1}, A3: {G3}})
        with pytest.raises(StructureError):
            decompose_cycles(build_graph(worked, st_))


class TestTriple:
    def test_first_seam(self):
        inst, st_ = cycle_instance([9, 5, 8])
        g = build_graph(inst, st_)
        (c,) = decompose_cycles(g)
        assert find_heavy_light_triple(c, g) == (0, 1, 2)

    def test_wraparound_seam(self):
        inst, st_ = cycle_instance([5, 9, 9])
        g = build_graph(inst, st_)
        (c,) = decompose_cycles(g)
        assert find_heavy_light_triple(c, g) == (2, 0, 1)

    def test_homogeneous_rejected(self):
        inst, st_ = cycle_instance([9, 9, 9])
        g = build_graph(inst, st_)
        with pytest.raises(ValueError):
            find_heavy_light_triple(CycleInfo((0, 1, 2), CycleKind.HEAVY), g)


@settings(max_examples=150, deadline=None)
@given(instances(max_n=5, max_m=9), st.data())
def test_scale_invariance(inst, data):
    owners = data.draw(st.lists(st.integers(0, inst.n - 1), min_size=inst.m, max_size=inst.m))
    bundles = {i: {g for g, o in enumerate(owners) if o == i} for i in range(inst.n)}
    agent = data.draw(st.integers(0, inst.n - 1))
    c = data.draw(st.integers(2, 50))
    scaled = Instance(inst.n, inst.m, tuple(
        tuple((a, v * c if a == agent else v) for a, v in entries) for entries in inst.valuation))
    g0 = build_graph(inst, make_state(inst, bundles))
    g1 = build_graph(scaled, make_state(scaled, bundles))
    for j in range(inst.n):
        if j != agent:
            for alpha in Threshold:
                assert in_g_alpha(g0.edge(agent, j), alpha) == in_g_alpha(g1.edge(agent, j), alpha)
