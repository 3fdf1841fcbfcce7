"""Turning link activations into explicit time-shared beam schedules.

A network state is a set of simultaneously active links in which every
node transmits on at most one link and receives on at most one link, i.e.
a matching between transmit halves and receive halves of the nodes.

:func:`bvn_schedule` is the production path (Birkhoff-von Neumann peeling
of the padded activation matrix).  :func:`lcm_coloring_schedule` builds the
same kind of schedule by edge coloring an integer-scaled multigraph; it is
exponential in the bit size of the activations and serves as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .bipartite import edge_color, max_matching
from .capacity import LinkActivation, LinkFlow, min_cut_value
from .errors import InvalidInputError, ScheduleInfeasibleError, SizeLimitError
from .model import DuplexMode, Link, Network, as_fraction

_ZERO = Fraction(0)

DEFAULT_MAX_EDGES = 10**6


@dataclass(frozen=True)
class NetworkState:
    links: FrozenSet[Link] = frozenset()

    def __init__(self, links: Iterable[Link] = ()):
        object.__setattr__(self, "links", frozenset((int(i), int(j)) for i, j in links))

    def __contains__(self, link) -> bool:
        return tuple(link) in self.links

    def __iter__(self):
        return iter(sorted(self.links))

    def __len__(self):
        return len(self.links)

    @property
    def is_idle(self) -> bool:
        return not self.links

    def __repr__(self):
        inner = ", ".join(f"{i}->{j}" for i, j in sorted(self.links))
        return f"NetworkState({{{inner}}})"


@dataclass(frozen=True)
class Schedule:
    """Time sharing over distinct states; durations are exact and sum to 1."""

    entries: Tuple[Tuple[NetworkState, Fraction], ...]

    def __init__(self, entries: Iterable[Tuple[NetworkState, object]]):
        merged: Dict[NetworkState, Fraction] = {}
        for state, duration in entries:
            if not isinstance(state, NetworkState):
                state = NetworkState(state)
            duration = as_fraction(duration)
            if duration < 0:
                raise InvalidInputError(f"negative duration {duration} for {state!r}")
            # dict keeps first-seen order, which is the emission order
            merged[state] = merged.get(state, _ZERO) + duration
        object.__setattr__(self, "entries", tuple(merged.items()))

    @classmethod
    def idle(cls) -> "Schedule":
        return cls([(NetworkState(), Fraction(1))])

    @classmethod
    def padded(cls, entries: Iterable[Tuple[NetworkState, object]]) -> "Schedule":
        """Build a schedule, dropping zero durations and idling for the remainder."""
        kept = [(s, as_fraction(d)) for s, d in entries if as_fraction(d) != 0]
        total = sum((d for _, d in kept), _ZERO)
        if total > 1:
            raise InvalidInputError(f"durations add up to {total} > 1")
        if total < 1:
            kept.append((NetworkState(), 1 - total))
        return cls(kept)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def states(self) -> List[NetworkState]:
        return [s for s, _ in self.entries]

    @property
    def total_duration(self) -> Fraction:
        return sum((d for _, d in self.entries), _ZERO)

    def link_time(self, link: Link) -> Fraction:
        return sum((d for s, d in self.entries if link in s), _ZERO)

    def link_activation(self) -> LinkActivation:
        times: Dict[Link, Fraction] = {}
        for state, d in self.entries:
            for e in state.links:
                times[e] = times.get(e, _ZERO) + d
        return LinkActivation(times)

    def covers(self, activation: LinkActivation) -> bool:
        """True when every link runs at least as long as ``activation`` asks."""
        times = self.link_activation()
        return all(times[e] >= v for e, v in activation.fractions.items())


def validate_state(state: NetworkState, network: Network) -> List[str]:
    problems = []
    tx: Dict[int, int] = {}
    rx: Dict[int, int] = {}
    for i, j in sorted(state.links):
        if network.capacity(i, j) <= 0:
            problems.append(f"link {i}->{j} is not in the network")
        tx[i] = tx.get(i, 0) + 1
        rx[j] = rx.get(j, 0) + 1
    problems += [f"node {i} transmits {_times(k)}" for i, k in sorted(tx.items()) if k > 1]
    problems += [f"node {j} receives {_times(k)}" for j, k in sorted(rx.items()) if k > 1]
    if network.mode is DuplexMode.HD:
        for relay in sorted(set(tx) & set(rx) & set(network.relays)):
            problems.append(f"relay {relay} transmits and receives")
    return problems


def _times(k):
    return "twice" if k == 2 else f"{k} times"


def validate_schedule(schedule: Schedule, network: Network) -> List[str]:
    problems = []
    if schedule.total_duration != 1:
        problems.append(f"durations sum to {schedule.total_duration}, not 1")
    for state, _ in schedule:
        problems += [f"{state!r}: {p}" for p in validate_state(state, network)]
    return problems


def _activation_matrix(activation: LinkActivation, n_relays: int):
    """Square matrix over transmitters 0..N (rows) and receivers 1..N+1 (columns)."""
    size = n_relays + 1
    problems = activation.budget_violations()
    matrix = [[_ZERO] * size for _ in range(size)]
    for (i, j), v in activation.fractions.items():
        if not (0 <= i <= n_relays and 1 <= j <= n_relays + 1) or i == j:
            if v != 0:
                problems.append(f"link {i}->{j} cannot be activated")
            continue
        matrix[i][j - 1] = v
    if problems:
        raise InvalidInputError("; ".join(problems))
    return matrix


def pad_to_doubly_stochastic(matrix: List[List[Fraction]]) -> List[List[Fraction]]:
    """Raise entries of a doubly substochastic matrix until all line sums are 1.

    Row and column deficits have equal totals; they are paired off greedily
    in row-major order.
    """
    size = len(matrix)
    padded = [list(row) for row in matrix]
    row_gap = [1 - sum(row) for row in padded]
    col_gap = [1 - sum(padded[i][j] for i in range(size)) for j in range(size)]
    for i in range(size):
        for j in range(size):
            if row_gap[i] and col_gap[j]:
                add = min(row_gap[i], col_gap[j])
                padded[i][j] += add
                row_gap[i] -= add
                col_gap[j] -= add
    return padded


def birkhoff_decomposition(matrix: List[List[Fraction]]) -> List[Tuple[Fraction, Tuple[int, ...]]]:
    """Peel a doubly stochastic matrix into weighted permutations.

    Each step finds a perfect matching on the positive entries, takes the
    smallest matched entry as its weight, and subtracts.  At least one entry
    drops to zero per step.  Returns ``(weight, perm)`` with ``perm[row] = col``.
    """
    size = len(matrix)
    work = [list(row) for row in matrix]
    out = []
    while True:
        support = {i: [j for j in range(size) if work[i][j] > 0] for i in range(size)}
        if not any(support.values()):
            return out
        match = max_matching(support)
        if len(match) != size:
            raise ValueError("matrix is not doubly stochastic; no perfect matching on its support")
        perm = tuple(match[i] for i in range(size))
        weight = min(work[i][perm[i]] for i in range(size))
        for i in range(size):
            work[i][perm[i]] -= weight
        out.append((weight, perm))


def bvn_schedule(activation: LinkActivation, n_relays: int) -> Schedule:
    """Schedule of 1-2-1 states whose link times dominate ``activation``.

    The activation matrix (transmitters 0..N by receivers 1..N+1) is padded
    to doubly stochastic and decomposed into permutations; entries that only
    exist because of padding are left idle in the emitted states.
    """
    base = _activation_matrix(activation, n_relays)
    padded = pad_to_doubly_stochastic(base)
    entries = []
    for weight, perm in birkhoff_decomposition(padded):
        links = [(i, j + 1) for i, j in enumerate(perm) if base[i][j] > 0]
        entries.append((NetworkState(links), weight))
    return Schedule(entries)


@dataclass(frozen=True)
class LcmColoring:
    lcm: int
    max_degree: int
    schedule: Schedule


def lcm_coloring(activation: LinkActivation, max_edges: int = DEFAULT_MAX_EDGES) -> LcmColoring:
    """Integer-scaling + edge-coloring construction of a schedule.

    Multiply activations by the LCM ``M`` of their denominators, replace each
    link by that many parallel edges, color the bipartite multigraph with
    ``Delta <= M`` colors and run each color class for ``1/Delta``.
    """
    problems = activation.budget_violations()
    if problems:
        raise InvalidInputError("; ".join(problems))
    support = activation.support()
    m = 1
    for e in support:
        m = math.lcm(m, activation[e].denominator)
    if m * len(support) > max_edges:
        raise SizeLimitError(
            f"LCM multigraph would need {m} x {len(support)} edges (limit {max_edges}); "
            "use bvn_schedule instead"
        )
    edges = []
    for e in support:
        edges += [e] * int(activation[e] * m)
    if not edges:
        return LcmColoring(m, 0, Schedule.idle())
    colors = edge_color(edges)
    delta = max(colors) + 1
    classes: List[set] = [set() for _ in range(delta)]
    for e, c in zip(edges, colors):
        classes[c].add(e)
    step = Fraction(1, delta)
    schedule = Schedule((NetworkState(links), step) for links in classes)
    return LcmColoring(m, delta, schedule)


def lcm_coloring_schedule(activation: LinkActivation, max_edges: int = DEFAULT_MAX_EDGES) -> Schedule:
    return lcm_coloring(activation, max_edges).schedule


def simulate(network: Network, schedule: Schedule, flow: LinkFlow) -> Fraction:
    """Check that ``schedule`` can carry ``flow`` and return the delivered rate.

    Raises :class:`ScheduleInfeasibleError` naming the first link whose flow
    exceeds (time active) x (capacity).
    """
    problems = validate_schedule(schedule, network)
    if problems:
        raise InvalidInputError("; ".join(problems))
    bad = flow.conservation_violations(network.n_relays)
    if bad:
        raise InvalidInputError(f"flow is not conserved at relays {bad}")
    times = schedule.link_activation()
    for e, f in flow.flows.items():
        if f < 0:
            raise InvalidInputError(f"negative flow on link {e[0]}->{e[1]}")
        available = times[e] * network.capacity(*e)
        if f > available:
            raise ScheduleInfeasibleError(e, f, available)
    return flow.out_of(0)


def schedule_rate(network: Network, schedule: Schedule) -> Fraction:
    """Best rate any flow can get out of ``schedule`` (its min cut)."""
    problems = validate_schedule(schedule, network)
    if problems:
        raise InvalidInputError("; ".join(problems))
    value, _ = min_cut_value(network, schedule.link_activation())
    return value


def state_count_bound(n_relays: int) -> int:
    k = n_relays + 2
    return k * k - 2 * k + 2
