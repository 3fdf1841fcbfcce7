import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from onetwoone.errors import InvalidInputError
from onetwoone.model import (
    DuplexMode,
    Network,
    diamond_network,
    gap,
    line_network,
    link_capacity_from_channel,
    rationalize,
    relay_state_count,
    require_valid,
    validate,
)

# direct substitution with natural logs, frozen here
GAP_FD = [3.4426950408889634, 8.05531508322024, 14.667935125551516,
          22.41463635333058, 30.95882496498603, 40.12050509666055]
GAP_HD = [3.4426950408889634, 7.640277583941396, 12.971941312441615,
          18.83670111950339, 25.06310021165638, 31.568038182635476]


def test_channel_capacity():
    assert link_capacity_from_channel(0, 10) == 0
    assert link_capacity_from_channel(1, 1) == 1
    assert link_capacity_from_channel(1 + 0j, 3) == pytest.approx(2)


@pytest.mark.parametrize("n", range(6))
def test_gap_values(n):
    assert gap(n, DuplexMode.FD) == pytest.approx(GAP_FD[n], rel=1e-12)
    assert gap(n, DuplexMode.HD) == pytest.approx(GAP_HD[n], rel=1e-12)


def test_gap_examples():
    assert round(gap(0, "fd"), 4) == 3.4427
    assert round(gap(1, "fd"), 4) == 8.0553
    assert round(gap(1, "hd"), 4) == 7.6403


def test_relay_state_count():
    assert relay_state_count(1, DuplexMode.FD) == 4
    assert relay_state_count(1, DuplexMode.HD) == 3
    assert relay_state_count(3, DuplexMode.FD) == 16


def test_channel_rejects_bad_power():
    with pytest.raises(InvalidInputError):
        link_capacity_from_channel(1, 0)
    with pytest.raises(InvalidInputError):
        link_capacity_from_channel(float("inf"), 1)


def test_gap_rejects_negative():
    with pytest.raises(InvalidInputError):
        gap(-1, "fd")


def test_rationalize_sqrt2():
    net = rationalize({(0, 1): math.sqrt(2)}, 1, Fraction(4, 100))
    assert net.capacity(0, 1) == Fraction(141, 100)


def test_rationalize_exact_and_zero():
    net = rationalize({(0, 1): 1.0, (1, 2): 0}, 1, Fraction(1, 7))
    assert net.capacity(0, 1) == 1
    assert net.capacity(1, 2) == 0


def test_rationalize_rejects_bad_epsilon():
    with pytest.raises(InvalidInputError):
        rationalize({(0, 1): 1.5}, 1, 0)


@given(
    st.floats(min_value=0, max_value=1e6, allow_nan=False),
    st.integers(min_value=0, max_value=6),
    st.fractions(min_value=Fraction(1, 10**6), max_value=10, max_denominator=10**6),
)
def test_rationalize_rounds_down_within_bound(value, n, eps):
    got = rationalize({(0, 1): value}, max(n, 1), eps).capacity(0, 1)
    exact = Fraction(value)
    bound = eps / (max(n, 1) + 1) ** 2
    assert got <= exact <= got + bound
    # decimal grid
    d = got.denominator
    while d % 10 == 0:
        d //= 10
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    assert d == 1


def test_validate_ok():
    assert validate(line_network(2, 3)) == []


def test_validate_problems():
    assert any("self-loop" in p for p in validate(Network(1, {(1, 1): 1})))
    assert any("negative capacity" in p for p in validate(Network(1, {(0, 1): -1})))
    assert validate(Network(1, {(1, 0): 1}))
    assert validate(Network(1, {(2, 1): 1}))
    assert validate(Network(1, {(0, 5): 1}))
    with pytest.raises(InvalidInputError):
        require_valid(Network(1, {(1, 1): 1}))


def test_network_helpers():
    net = diamond_network([(1, 1000), (1000, 1)])
    assert net.n_relays == 2
    assert net.destination == 3
    assert net.capacity(0, 1) == 1
    assert net.capacity(2, 3) == 1
    assert net.capacity(1, 2) == 0
    assert net.with_mode("hd").mode is DuplexMode.HD
    assert net == Network(2, dict(net.links), "fd")
    assert line_network(2, 3).active_links() == [(0, 1), (1, 2)]


fractions_ = st.fractions(max_denominator=10**6)


@given(fractions_, fractions_)
def test_rational_sum_is_exact(x, y):
    a, b, c, d = x.numerator, x.denominator, y.numerator, y.denominator
    s = x + y
    assert s * (b * d) == a * d + c * b
    assert math.gcd(s.numerator, s.denominator) == 1


@given(st.integers(min_value=1, max_value=200))
def test_gap_fd_at_least_hd(n):
    assert gap(n, DuplexMode.FD) >= gap(n, DuplexMode.HD)


@given(
    st.floats(min_value=0, max_value=100),
    st.floats(min_value=0, max_value=100),
    st.floats(min_value=1e-3, max_value=100),
)
def test_channel_capacity_monotone(h, extra, power):
    assert link_capacity_from_channel(h + extra, power) >= link_capacity_from_channel(h, power)
    assert link_capacity_from_channel(h, power + extra) >= link_capacity_from_channel(h, power)
