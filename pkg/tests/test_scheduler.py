from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from netgen import networks
from onetwoone.bipartite import edge_color, max_matching
from onetwoone.capacity import LinkActivation, LinkFlow, fd_capacity
from onetwoone.errors import InvalidInputError, ScheduleInfeasibleError, SizeLimitError
from onetwoone.model import diamond_network, line_network
from onetwoone.scheduler import (
    NetworkState,
    Schedule,
    birkhoff_decomposition,
    bvn_schedule,
    lcm_coloring,
    lcm_coloring_schedule,
    pad_to_doubly_stochastic,
    schedule_rate,
    simulate,
    state_count_bound,
    validate_schedule,
    validate_state,
)

HALF = Fraction(1, 2)


def test_state_validation():
    fd = line_network(2, 3)
    assert validate_state(NetworkState([(0, 1), (1, 2)]), fd) == []
    hd = line_network(2, 3, mode="hd")
    assert validate_state(NetworkState([(0, 1), (1, 2)]), hd) == ["relay 1 transmits and receives"]
    net = diamond_network([(1, 1), (1, 1)])
    assert "node 0 transmits twice" in validate_state(NetworkState([(0, 1), (0, 2)]), net)
    assert "node 3 receives twice" in validate_state(NetworkState([(1, 3), (2, 3)]), net)
    assert validate_state(NetworkState([(1, 2)]), net) == ["link 1->2 is not in the network"]


def test_schedule_merges_and_pads():
    s = Schedule([([(0, 1)], HALF), ([(0, 1)], Fraction(1, 4))])
    assert len(s) == 1
    assert s.total_duration == Fraction(3, 4)
    p = Schedule.padded([([(0, 1)], Fraction(3, 4)), ([(1, 2)], 0)])
    assert p.total_duration == 1
    assert p.states[-1].is_idle
    with pytest.raises(InvalidInputError):
        Schedule([([(0, 1)], -1)])


def test_birkhoff_two_by_two():
    out = birkhoff_decomposition([[HALF, HALF], [HALF, HALF]])
    assert sorted(perm for _, perm in out) == [(0, 1), (1, 0)]
    assert all(w == HALF for w, _ in out)


def test_padding_line_sums():
    m = pad_to_doubly_stochastic([[HALF, 0], [Fraction(1, 3), 0]])
    assert all(sum(row) == 1 for row in m)
    assert all(sum(m[i][j] for i in range(2)) == 1 for j in range(2))


def test_bvn_single_relay():
    act = LinkActivation({(0, 1): 1, (1, 2): Fraction(2, 3)})
    s = bvn_schedule(act, 1)
    assert s.covers(act)
    assert s.total_duration == 1
    assert s.link_time((1, 2)) >= Fraction(2, 3)
    assert validate_schedule(s, line_network(2, 3)) == []


def test_bvn_zero_activation():
    s = bvn_schedule(LinkActivation(), 2)
    assert s.entries == ((NetworkState(), 1),)


def test_bvn_rejects_overloaded():
    with pytest.raises(InvalidInputError):
        bvn_schedule(LinkActivation({(0, 1): HALF, (0, 2): 1}), 2)


def test_lcm_symmetric_diamond():
    act = LinkActivation({(0, 1): HALF, (0, 2): HALF, (1, 3): HALF, (2, 3): HALF})
    res = lcm_coloring(act)
    assert res.lcm == 2 and res.max_degree == 2
    assert dict(res.schedule.entries) == {
        NetworkState([(0, 1), (2, 3)]): HALF,
        NetworkState([(0, 2), (1, 3)]): HALF,
    }


def test_lcm_integer_activation():
    res = lcm_coloring(LinkActivation({(0, 1): 1}))
    assert (res.lcm, res.max_degree, len(res.schedule)) == (1, 1, 1)


def test_lcm_single_relay():
    act = LinkActivation({(0, 1): 1, (1, 2): Fraction(2, 3)})
    res = lcm_coloring(act)
    assert res.lcm == 3 and res.max_degree == 3
    assert res.schedule.covers(act)
    assert res.schedule.total_duration == 1


def test_lcm_guard():
    act = LinkActivation({(0, 1): Fraction(1, 10**6 + 1)})
    with pytest.raises(SizeLimitError):
        lcm_coloring_schedule(act)


def test_simulate_full_time():
    net = line_network(2, 3)
    s = Schedule([([(0, 1), (1, 2)], 1)])
    assert simulate(net, s, LinkFlow({(0, 1): 2, (1, 2): 2})) == 2


def test_simulate_deficit():
    net = line_network(2, 3)
    s = Schedule([([(0, 1), (1, 2)], HALF), ([(0, 1)], HALF)])
    with pytest.raises(ScheduleInfeasibleError) as exc:
        simulate(net, s, LinkFlow({(0, 1): 2, (1, 2): 2}))
    assert exc.value.link == (1, 2)
    assert exc.value.deficit == Fraction(1, 2)


def test_simulate_zero_flow():
    assert simulate(line_network(2, 3), Schedule.idle(), LinkFlow()) == 0


def test_schedule_rate_idle():
    assert schedule_rate(line_network(2, 3), Schedule.idle()) == 0


def test_state_count_bound():
    assert [state_count_bound(n) for n in range(4)] == [2, 5, 10, 17]


def test_tightness_schedule():
    net = diamond_network([(1, 1000), (1000, 1)])
    res = fd_capacity(net)
    s = bvn_schedule(res.activation, 2)
    assert simulate(net, s, res.flow) == Fraction(2000, 1001)
    assert len(s) <= state_count_bound(2)


def test_max_matching():
    m = max_matching({0: [0, 1], 1: [0]})
    assert m == {0: 1, 1: 0}


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=40))
def test_edge_coloring_is_proper_and_tight(edges):
    colors = edge_color(edges)
    if not edges:
        return
    degree = {}
    for l, r in edges:
        degree[("l", l)] = degree.get(("l", l), 0) + 1
        degree[("r", r)] = degree.get(("r", r), 0) + 1
    assert max(colors) + 1 == max(degree.values())
    seen = set()
    for (l, r), c in zip(edges, colors):
        assert (("l", l), c) not in seen and (("r", r), c) not in seen
        seen.add((("l", l), c))
        seen.add((("r", r), c))


@settings(max_examples=120, deadline=None)
@given(networks(max_relays=4))
def test_bvn_realizes_capacity(net):
    res = fd_capacity(net)
    s = bvn_schedule(res.activation, net.n_relays)
    assert validate_schedule(s, net) == []
    assert s.covers(res.activation)
    assert simulate(net, s, res.flow) == res.value
    assert len(s) <= state_count_bound(net.n_relays)


@settings(max_examples=60, deadline=None)
@given(networks(max_relays=3))
def test_lcm_agrees_with_bvn(net):
    res = fd_capacity(net)
    try:
        lcm = lcm_coloring(res.activation, max_edges=10**5)
    except SizeLimitError:
        assume(False)
    assert lcm.max_degree <= lcm.lcm
    assert lcm.schedule.covers(res.activation)
    assert validate_schedule(lcm.schedule, net) == []
    bvn = bvn_schedule(res.activation, net.n_relays)
    assert simulate(net, lcm.schedule, res.flow) == simulate(net, bvn, res.flow)
