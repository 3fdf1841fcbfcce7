from fractions import Fraction

import pytest
from hypothesis import given, settings

from netgen import diamond_pairs
from onetwoone.capacity import fd_capacity
from onetwoone.diamond import (
    DiamondNetwork,
    best_relay_guarantee,
    diamond_capacity,
    fd_relay_selection,
    hd_activation_from_x,
    hd_flow,
    hd_relay_selection,
    hd_schedule,
    solve_p4,
)
from onetwoone.errors import InvalidInputError
from onetwoone.model import Network, line_network
from onetwoone.oracle import brute_force_capacity
from onetwoone.scheduler import NetworkState, schedule_rate, simulate, validate_schedule

HALF = Fraction(1, 2)


def hd(*pairs):
    return DiamondNetwork(tuple(pairs), "hd")


def fd(*pairs):
    return DiamondNetwork(tuple(pairs), "fd")


def test_capacity_examples():
    sol = diamond_capacity(hd((2, 3)))
    assert sol.value == Fraction(6, 5) and sol.x == (1,)
    assert diamond_capacity(fd((1, 1000), (1000, 1))).value == Fraction(2000, 1001)
    sol = diamond_capacity(hd((1, 1), (1, 1)))
    assert sol.value == 1 and sol.x == (1, 1)


def test_relay_selection():
    assert fd_relay_selection(fd((1, 1000), (1000, 1))) == {1, 2}
    assert len(fd_relay_selection(fd((10, 10), (1, 1)))) <= 2
    assert fd_relay_selection(fd((2, 3))) == {1}
    assert hd_relay_selection(hd((2, 3))) == {1}
    assert hd_relay_selection(hd((1, 1), (1, 1))) == {1, 2}
    with pytest.raises(InvalidInputError):
        fd_relay_selection(hd((1, 1)))


def test_hd_schedule_single_relay():
    s = hd_schedule(hd((2, 3)))
    assert dict(s.entries) == {
        NetworkState([(0, 1)]): Fraction(3, 5),
        NetworkState([(1, 2)]): Fraction(2, 5),
    }
    assert schedule_rate(hd((2, 3)).to_network(), s) == Fraction(6, 5)


def test_hd_schedule_symmetric():
    d = hd((1, 1), (1, 1))
    s = hd_schedule(d)
    assert dict(s.entries) == {
        NetworkState([(0, 2), (1, 3)]): HALF,
        NetworkState([(0, 1), (2, 3)]): HALF,
    }
    assert schedule_rate(d.to_network(), s) == 1


def test_hd_schedule_zero():
    s = hd_schedule(hd((0, 0), (3, 0)))
    assert s.entries == ((NetworkState(), 1),)


def test_best_relay():
    best, ratio = best_relay_guarantee(fd((1, 1000), (1000, 1)))
    assert best == 1 and ratio == Fraction(1001, 2000)
    assert best_relay_guarantee(fd((4, 7)))[1] == 1
    best, ratio = best_relay_guarantee(hd((1, 1), (1, 1)))
    assert best == HALF and ratio == HALF


def test_from_network():
    assert DiamondNetwork.from_network(line_network(2, 3)) == fd((2, 3))
    assert DiamondNetwork.from_network(Network(2, {(0, 1): 1, (1, 2): 1})) is None
    assert DiamondNetwork.from_network(Network(1, {(0, 2): 1})) is None


def test_p4_example():
    value, act = solve_p4(hd((2, 3)))
    assert value == Fraction(6, 5)
    assert act.left == (Fraction(3, 5),) and act.right == (Fraction(2, 5),)


@settings(max_examples=150, deadline=None)
@given(diamond_pairs(max_relays=6))
def test_fd_diamond(pairs):
    d = DiamondNetwork(tuple(pairs), "fd")
    sol = diamond_capacity(d)
    assert len(sol.support) <= 2
    assert sol.value == fd_capacity(d.to_network()).value
    best, ratio = best_relay_guarantee(d)
    assert 2 * best >= sol.value


@settings(max_examples=150, deadline=None)
@given(diamond_pairs(max_relays=6))
def test_hd_diamond(pairs):
    d = DiamondNetwork(tuple(pairs), "hd")
    sol = diamond_capacity(d)
    assert len(sol.support) <= 3
    value, act = solve_p4(d)
    assert value == sol.value
    assert act.violations(d) == []
    if value > 0:
        assert act.pivots()
    mapped = hd_activation_from_x(d, sol.x)
    assert mapped.violations(d) == []
    assert mapped.rate(d) == sol.value
    if sol.value > 0:
        assert mapped.pivots()
    s = hd_schedule(d)
    net = d.to_network()
    assert validate_schedule(s, net) == []
    assert simulate(net, s, hd_flow(d, sol.x)) == sol.value
    assert 2 * best_relay_guarantee(d)[0] >= sol.value


@settings(max_examples=40, deadline=None)
@given(diamond_pairs(max_relays=3))
def test_hd_diamond_matches_state_lp(pairs):
    d = DiamondNetwork(tuple(pairs), "hd")
    assert diamond_capacity(d).value == brute_force_capacity(d.to_network())[0]
