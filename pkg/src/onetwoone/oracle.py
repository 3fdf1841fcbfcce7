"""Brute-force reference computations over explicit network states.

Everything here enumerates all states (or all cuts), so it is only meant
for small networks and for checking the polynomial-time code.  Unlike
:func:`onetwoone.capacity.fd_capacity` the state LP also handles half-duplex
networks, since the duplex constraint lives in which states exist.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

from .errors import SizeLimitError
from .lpsolve import LPBuilder, solve_lp
from .model import DuplexMode, Network, require_valid
from .scheduler import NetworkState, Schedule

_ZERO = Fraction(0)

DEFAULT_MAX_STATES = 10**5
MAX_CUT_RELAYS = 20


def enumerate_states(network: Network, max_states: int = DEFAULT_MAX_STATES) -> List[NetworkState]:
    """Every valid state over the network's positive links, idle state included.

    Sorted by number of links, then by the sorted link list.
    """
    half = network.mode is DuplexMode.HD
    dest = network.destination
    out = {}
    for i, j in network.active_links():
        out.setdefault(i, []).append(j)
    transmitters = sorted(out)
    found: List[Tuple[Tuple[int, int], ...]] = []
    chosen: List[Tuple[int, int]] = []
    receiving = set()

    def place(k, transmitting):
        if k == len(transmitters):
            if len(found) >= max_states:
                raise SizeLimitError(f"more than {max_states} network states; raise max_states")
            found.append(tuple(chosen))
            return
        i = transmitters[k]
        place(k + 1, transmitting)
        if half and i in receiving:
            return
        for j in out[i]:
            if j in receiving or (half and j != dest and j in transmitting):
                continue
            chosen.append((i, j))
            receiving.add(j)
            transmitting.add(i)
            place(k + 1, transmitting)
            transmitting.discard(i)
            receiving.discard(j)
            chosen.pop()

    place(0, set())
    found.sort(key=lambda links: (len(links), sorted(links)))
    return [NetworkState(links) for links in found]


def brute_force_capacity(
    network: Network, max_states: int = DEFAULT_MAX_STATES
) -> Tuple[Fraction, Schedule]:
    """Capacity by optimizing directly over time shares of every state.

    maximize the source's outgoing flow subject to: each link's flow is at
    most (time its link is on) x (capacity), flow is conserved at relays,
    and the state time shares sum to at most one.  Returns the value and
    the optimal schedule, padded with idle time.
    """
    require_valid(network)
    states = [s for s in enumerate_states(network, max_states) if not s.is_idle]
    links = network.active_links()
    if not states:
        return _ZERO, Schedule.idle()
    b = LPBuilder()
    share = [b.var(("state", k)) for k in range(len(states))]
    flow = {e: b.var(("flow", e)) for e in links}
    b.maximize({flow[e]: 1 for e in links if e[0] == 0})
    for e in links:
        terms = {flow[e]: Fraction(1)}
        for v, s in zip(share, states):
            if e in s:
                terms[v] = -network.capacity(*e)
        b.add_le(terms, 0)
    b.add_le({v: 1 for v in share}, 1)
    for k in network.relays:
        terms = {}
        for e in links:
            if e[0] == k:
                terms[flow[e]] = terms.get(flow[e], 0) + 1
            if e[1] == k:
                terms[flow[e]] = terms.get(flow[e], 0) - 1
        if terms:
            b.add_eq(terms, 0)
    sol = solve_lp(b.build())
    entries = [(s, sol.values[v]) for s, v in zip(states, share)]
    return sol.objective_value, Schedule.padded(entries)


def exhaustive_min_cut(
    network: Network, schedule: Schedule, max_relays: int = MAX_CUT_RELAYS
) -> Tuple[Fraction, frozenset]:
    """Minimum over all source-side sets of the schedule's average cut rate.

    A state contributes the capacity of its links crossing the cut, weighted
    by its duration.  Tries all ``2^N`` cuts, so ``N`` is capped.
    """
    n = network.n_relays
    if n > max_relays:
        raise SizeLimitError(f"exhaustive cut search over {n} relays (limit {max_relays})")
    best: Optional[Fraction] = None
    best_side = frozenset()
    for size in range(n + 1):
        for extra in combinations(network.relays, size):
            side = frozenset((0,) + extra)
            total = _ZERO
            for state, d in schedule:
                total += d * sum(
                    (network.capacity(i, j) for i, j in state.links if i in side and j not in side),
                    _ZERO,
                )
            if best is None or total < best:
                best, best_side = total, side
    return best, best_side
