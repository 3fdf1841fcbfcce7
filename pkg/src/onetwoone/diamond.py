"""Diamond networks: one layer of parallel relays between source and destination.

Relay ``k`` (1-based) has an incoming link of capacity ``left`` from the
source and an outgoing link of capacity ``right`` to the destination.  The
path through relay ``k`` runs at ``min(left, right)`` in full duplex and at
``left * right / (left + right)`` in half duplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .capacity import LinkFlow
from .errors import InvalidInputError
from .lpsolve import LPBuilder, LinearProgram, VertexSolution, solve_lp
from .model import DuplexMode, Network, as_fraction, diamond_network
from .scheduler import NetworkState, Schedule

_ZERO = Fraction(0)


@dataclass(frozen=True)
class DiamondNetwork:
    relays: Tuple[Tuple[Fraction, Fraction], ...]
    mode: DuplexMode = DuplexMode.FD

    def __post_init__(self):
        relays = tuple((as_fraction(l), as_fraction(r)) for l, r in self.relays)
        for k, (l, r) in enumerate(relays, start=1):
            if l < 0 or r < 0:
                raise InvalidInputError(f"relay {k} has a negative capacity")
        object.__setattr__(self, "relays", relays)
        object.__setattr__(self, "mode", DuplexMode(self.mode))

    @property
    def n(self) -> int:
        return len(self.relays)

    @property
    def destination(self) -> int:
        return self.n + 1

    def path_capacity(self, k: int) -> Fraction:
        """Rate of the two-hop path through relay ``k`` (1-based)."""
        l, r = self.relays[k - 1]
        if l == 0 or r == 0:
            return _ZERO
        if self.mode is DuplexMode.FD:
            return min(l, r)
        return l * r / (l + r)

    def usable(self) -> List[int]:
        return [k for k in range(1, self.n + 1) if self.path_capacity(k) > 0]

    def to_network(self) -> Network:
        return diamond_network(self.relays, self.mode)

    @classmethod
    def from_network(cls, network: Network) -> Optional["DiamondNetwork"]:
        """Diamond view of ``network``, or None if it has relay-relay or direct links."""
        dest = network.destination
        for (i, j), c in network.links.items():
            if c == 0:
                continue
            if not ((i == 0 and 1 <= j <= network.n_relays) or (j == dest and 1 <= i <= network.n_relays)):
                return None
        if network.n_relays == 0:
            return None
        pairs = [(network.capacity(0, k), network.capacity(k, dest)) for k in network.relays]
        return cls(tuple(pairs), network.mode)


@dataclass(frozen=True)
class DiamondSolution:
    value: Fraction
    x: Tuple[Fraction, ...]
    lp: Optional[LinearProgram] = field(default=None, repr=False, compare=False)
    vertex: Optional[VertexSolution] = field(default=None, repr=False, compare=False)

    def __iter__(self):
        return iter((self.value, self.x))

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(k for k, v in enumerate(self.x, start=1) if v > 0)


def diamond_capacity(d: DiamondNetwork) -> DiamondSolution:
    """Optimal vertex of the per-relay utilization LP.

    maximize ``sum x_k C_k`` subject to ``0 <= x_k <= 1``, the source budget
    ``sum x_k C_k / left_k <= 1`` and the destination budget
    ``sum x_k C_k / right_k <= 1``.  Relays with a zero-capacity side are
    left out and get ``x_k = 0``.
    """
    usable = d.usable()
    x = [_ZERO] * d.n
    if not usable:
        return DiamondSolution(_ZERO, tuple(x))
    b = LPBuilder()
    var = {k: b.var(k) for k in usable}
    b.maximize({var[k]: d.path_capacity(k) for k in usable})
    for k in usable:
        b.add_le({var[k]: 1}, 1)
    b.add_le({var[k]: d.path_capacity(k) / d.relays[k - 1][0] for k in usable}, 1)
    b.add_le({var[k]: d.path_capacity(k) / d.relays[k - 1][1] for k in usable}, 1)
    lp = b.build()
    sol = solve_lp(lp)
    for k in usable:
        x[k - 1] = sol.values[var[k]]
    return DiamondSolution(sol.objective_value, tuple(x), lp, sol)


def fd_relay_selection(d: DiamondNetwork) -> FrozenSet[int]:
    """Relays used by an optimal full-duplex vertex (at most two)."""
    if d.mode is not DuplexMode.FD:
        raise InvalidInputError("fd_relay_selection needs a full-duplex diamond")
    return diamond_capacity(d).support


def hd_relay_selection(d: DiamondNetwork) -> FrozenSet[int]:
    """Relays used by an optimal half-duplex vertex (at most three)."""
    if d.mode is not DuplexMode.HD:
        raise InvalidInputError("hd_relay_selection needs a half-duplex diamond")
    return diamond_capacity(d).support


@dataclass(frozen=True)
class HdActivation:
    """Per-relay receive time ``left[k]`` and transmit time ``right[k]``."""

    left: Tuple[Fraction, ...]
    right: Tuple[Fraction, ...]

    def violations(self, d: DiamondNetwork) -> List[str]:
        problems = []
        for k, ((l, r), a, b) in enumerate(zip(d.relays, self.left, self.right), start=1):
            if a < 0 or b < 0:
                problems.append(f"relay {k}: negative activation")
            if a * l != b * r:
                problems.append(f"relay {k}: inflow {a * l} != outflow {b * r}")
            if a + b > 1:
                problems.append(f"relay {k}: busy for {a + b} of the time")
        if sum(self.left) > 1:
            problems.append("source transmits more than 100% of the time")
        if sum(self.right) > 1:
            problems.append("destination receives more than 100% of the time")
        return problems

    def rate(self, d: DiamondNetwork) -> Fraction:
        return sum((a * l for a, (l, _) in zip(self.left, d.relays)), _ZERO)

    def pivots(self) -> List[int]:
        """Relays that are busy (receiving or transmitting) all the time."""
        return [k for k, (a, b) in enumerate(zip(self.left, self.right), start=1) if a + b == 1]


def solve_p4(d: DiamondNetwork) -> Tuple[Fraction, HdActivation]:
    """Solve the half-duplex activation LP directly.

    maximize ``sum a_k left_k`` with flow balance ``a_k left_k = b_k right_k``,
    source/destination budgets ``sum a <= 1``, ``sum b <= 1`` and the
    half-duplex budget ``a_k + b_k <= 1``.
    """
    usable = d.usable()
    left = [_ZERO] * d.n
    right = [_ZERO] * d.n
    if not usable:
        return _ZERO, HdActivation(tuple(left), tuple(right))
    b = LPBuilder()
    a_var = {k: b.var(("a", k)) for k in usable}
    b_var = {k: b.var(("b", k)) for k in usable}
    b.maximize({a_var[k]: d.relays[k - 1][0] for k in usable})
    for k in usable:
        l, r = d.relays[k - 1]
        b.add_eq({a_var[k]: l, b_var[k]: -r}, 0)
    b.add_le({a_var[k]: 1 for k in usable}, 1)
    b.add_le({b_var[k]: 1 for k in usable}, 1)
    for k in usable:
        b.add_le({a_var[k]: 1, b_var[k]: 1}, 1)
    sol = solve_lp(b.build())
    for k in usable:
        left[k - 1] = sol.values[a_var[k]]
        right[k - 1] = sol.values[b_var[k]]
    return sol.objective_value, HdActivation(tuple(left), tuple(right))


def hd_activation_from_x(d: DiamondNetwork, x: Sequence[Fraction]) -> HdActivation:
    """Map relay utilizations to receive/transmit times (half duplex)."""
    left, right = [], []
    for (l, r), xk in zip(d.relays, x):
        if xk == 0:
            left.append(_ZERO)
            right.append(_ZERO)
        else:
            left.append(xk * r / (l + r))
            right.append(xk * l / (l + r))
    return HdActivation(tuple(left), tuple(right))


def _state(d: DiamondNetwork, fed: Optional[int], feeding: Optional[int]) -> NetworkState:
    # source -> relay `fed` and relay `feeding` -> destination
    links = []
    if fed is not None:
        links.append((0, fed))
    if feeding is not None:
        links.append((feeding, d.destination))
    return NetworkState(links)


def hd_schedule(d: DiamondNetwork) -> Schedule:
    """Explicit half-duplex schedule achieving :func:`diamond_capacity`.

    One relay (the pivot, lowest index among those busy 100% of the time)
    alternates roles: while it forwards to the destination every other relay
    takes its turn receiving from the source, and while it receives every
    other relay takes its turn forwarding.
    """
    if d.mode is not DuplexMode.HD:
        raise InvalidInputError("hd_schedule needs a half-duplex diamond")
    sol = diamond_capacity(d)
    if sol.value == 0:
        return Schedule.idle()
    act = hd_activation_from_x(d, sol.x)
    pivots = act.pivots()
    if not pivots:
        raise AssertionError("optimal vertex without a fully busy relay")
    p = pivots[0]
    others = [k for k in range(1, d.n + 1) if k != p]
    left, right = act.left, act.right
    entries = []
    for k in others:
        entries.append((_state(d, k, p), left[k - 1]))
    entries.append((_state(d, None, p), right[p - 1] - sum(left[k - 1] for k in others)))
    for k in others:
        entries.append((_state(d, p, k), right[k - 1]))
    entries.append((_state(d, p, None), left[p - 1] - sum(right[k - 1] for k in others)))
    for state, duration in entries:
        if duration < 0:
            raise AssertionError(f"negative duration for {state!r}")
    return Schedule([(s, t) for s, t in entries if t > 0])


def hd_flow(d: DiamondNetwork, x: Sequence[Fraction]) -> LinkFlow:
    """Link flows of the half-duplex relay utilizations ``x``."""
    flows = {}
    for k, xk in enumerate(x, start=1):
        if xk > 0:
            f = xk * d.path_capacity(k)
            flows[(0, k)] = f
            flows[(k, d.destination)] = f
    return LinkFlow(flows)


def best_relay_guarantee(d: DiamondNetwork) -> Tuple[Fraction, Fraction]:
    """Best single-relay rate and its ratio to the diamond capacity.

    The ratio is at least 1/2; it is reported as 1 when the capacity is 0.
    """
    if d.n == 0:
        raise InvalidInputError("diamond has no relays")
    best = max(d.path_capacity(k) for k in range(1, d.n + 1))
    value = diamond_capacity(d).value
    ratio = Fraction(1) if value == 0 else best / value
    return best, ratio
