"""Path-utilization view of the full-duplex capacity.

Each source-destination path ``p`` runs at its bottleneck rate ``C_p`` for
a fraction ``x_p`` of the time; while it runs, link ``(i, j)`` on the path
is busy for ``C_p / cap(i, j)`` of that time.  Maximizing ``sum x_p C_p``
under per-node transmit/receive budgets gives the same value as the flow
LP in :mod:`onetwoone.capacity`, and its corner points use few paths.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .capacity import LinkActivation, LinkFlow
from .errors import InvalidInputError, NotFoundError, SizeLimitError, UnsupportedModeError
from .lpsolve import LPBuilder, LinearProgram, VertexSolution, solve_lp
from .model import DuplexMode, Link, Network, require_valid

_ZERO = Fraction(0)

DEFAULT_MAX_PATHS = 10**5


@dataclass(frozen=True)
class Path:
    nodes: Tuple[int, ...]
    link_capacities: Tuple[Fraction, ...] = field(compare=False)

    @classmethod
    def through(cls, network: Network, nodes) -> "Path":
        nodes = tuple(nodes)
        caps = tuple(network.capacity(i, j) for i, j in zip(nodes, nodes[1:]))
        return cls(nodes, caps)

    @property
    def links(self) -> List[Link]:
        return list(zip(self.nodes, self.nodes[1:]))

    @property
    def capacity(self) -> Fraction:
        """Full-duplex rate of the path: its weakest link."""
        return min(self.link_capacities)

    def link_capacity(self, link: Link) -> Fraction:
        try:
            return self.link_capacities[self.links.index(tuple(link))]
        except ValueError:
            raise InvalidInputError(f"link {link} is not on path {self.nodes}") from None

    def next_hop(self, node: int) -> Optional[int]:
        k = self.nodes.index(node)
        return self.nodes[k + 1] if k + 1 < len(self.nodes) else None

    def prev_hop(self, node: int) -> Optional[int]:
        k = self.nodes.index(node)
        return self.nodes[k - 1] if k > 0 else None

    def __str__(self):
        return "-".join(map(str, self.nodes))


def enumerate_paths(network: Network, max_paths: int = DEFAULT_MAX_PATHS) -> List[Path]:
    """All simple source-destination paths over positive-capacity links.

    Depth-first with ascending neighbours, so the list comes out in
    lexicographic order of node sequences.
    """
    dest = network.destination
    succ: Dict[int, List[int]] = {}
    for i, j in network.active_links():
        succ.setdefault(i, []).append(j)
    found: List[Path] = []
    stack = [0]
    on_path = {0}

    def extend(u):
        for v in succ.get(u, ()):
            if v in on_path:
                continue
            stack.append(v)
            if v == dest:
                if len(found) >= max_paths:
                    raise SizeLimitError(f"more than {max_paths} paths; raise max_paths")
                found.append(Path.through(network, stack))
            else:
                on_path.add(v)
                extend(v)
                on_path.discard(v)
            stack.pop()

    extend(0)
    return found


def activation_fraction(path: Path, link: Link) -> Fraction:
    """Share of the path's running time that ``link`` must be on."""
    cap = path.link_capacity(link)
    if cap <= 0:
        raise InvalidInputError(f"link {link} has no capacity")
    return path.capacity / cap


@dataclass(frozen=True)
class PathSolution:
    paths: Tuple[Path, ...]
    x: Tuple[Fraction, ...]
    value: Fraction
    lp: Optional[LinearProgram] = field(default=None, repr=False, compare=False)
    vertex: Optional[VertexSolution] = field(default=None, repr=False, compare=False)

    @property
    def utilizations(self) -> Dict[Path, Fraction]:
        return dict(zip(self.paths, self.x))

    @property
    def active(self) -> List[Tuple[Path, Fraction]]:
        return [(p, x) for p, x in zip(self.paths, self.x) if x > 0]


def p1_lp(paths: List[Path], network: Network) -> LinearProgram:
    b = LPBuilder()
    xs = [b.var(k) for k in range(len(paths))]
    b.maximize({x: p.capacity for x, p in zip(xs, paths)})
    # transmit budgets for nodes 0..N, receive budgets for nodes 1..N+1
    for node in range(network.n_relays + 1):
        terms = {}
        for x, p in zip(xs, paths):
            if node in p.nodes:
                terms[x] = activation_fraction(p, (node, p.next_hop(node)))
        if terms:
            b.add_le(terms, 1)
    for node in range(1, network.destination + 1):
        terms = {}
        for x, p in zip(xs, paths):
            if node in p.nodes:
                terms[x] = activation_fraction(p, (p.prev_hop(node), node))
        if terms:
            b.add_le(terms, 1)
    return b.build()


def solve_p1(network: Network, max_paths: int = DEFAULT_MAX_PATHS) -> PathSolution:
    """Optimal vertex of the path-utilization LP (full duplex only)."""
    require_valid(network)
    if network.mode is not DuplexMode.FD:
        raise UnsupportedModeError("the path LP models full-duplex relays")
    paths = enumerate_paths(network, max_paths)
    if not paths:
        return PathSolution((), (), _ZERO)
    lp = p1_lp(paths, network)
    sol = solve_lp(lp)
    return PathSolution(tuple(paths), sol.values, sol.objective_value, lp, sol)


def is_two_layer(network: Network) -> Optional[int]:
    """Return ``M`` if the network is a balanced 2-layer network, else None.

    Layer 1 is the set of relays fed by the source and layer 2 the set of
    relays feeding the destination; they must partition the relays into
    equal halves and every link must go source->L1, L1->L2 or L2->dest.
    """
    dest = network.destination
    links = network.active_links()
    first = {j for i, j in links if i == 0}
    second = {i for i, j in links if j == dest}
    relays = set(network.relays)
    if not relays or first & second or first | second != relays or len(first) != len(second):
        return None
    for i, j in links:
        ok = (i == 0 and j in first) or (i in first and j in second) or (i in second and j == dest)
        if not ok:
            return None
    return len(first)


@dataclass(frozen=True)
class SparsityReport:
    active_count: int
    bound: int
    ok: bool
    general_bound: int
    general_ok: bool
    layers: Optional[int] = None


def sparsity_report(solution: PathSolution, network: Network) -> SparsityReport:
    """Count active paths against ``2N+2`` (or ``2M+1`` for 2-layer networks)."""
    active = len(solution.active)
    general = 2 * network.n_relays + 2
    m = is_two_layer(network)
    bound = general if m is None else 2 * m + 1
    return SparsityReport(active, bound, active <= bound, general, active <= general, m)


def best_path(network: Network) -> Tuple[Path, Fraction]:
    """Widest (max-bottleneck) path by a Dijkstra sweep.

    Among equally wide paths the lexicographically smallest node sequence
    reached first wins.
    """
    dest = network.destination
    succ: Dict[int, List[Tuple[int, Fraction]]] = {}
    for (i, j), c in network.links.items():
        if c > 0:
            succ.setdefault(i, []).append((j, c))
    done = set()
    heap = [(_NegWidth(None), (0,))]
    while heap:
        width, route = heapq.heappop(heap)
        u = route[-1]
        if u in done:
            continue
        done.add(u)
        if u == dest:
            return Path.through(network, route), width.value
        for v, c in succ.get(u, ()):
            if v not in done:
                w = c if width.value is None else min(width.value, c)
                heapq.heappush(heap, (_NegWidth(w), route + (v,)))
    raise NotFoundError("no path from source to destination")


class _NegWidth:
    """Heap key ordering larger widths first; ``None`` means unbounded."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __lt__(self, other):
        if self.value is None:
            return other.value is not None
        if other.value is None:
            return False
        return self.value > other.value

    def __eq__(self, other):
        return self.value == other.value


def path_activation(solution: PathSolution, network: Network) -> Tuple[LinkActivation, LinkFlow]:
    """Link activation and flow induced by running each path ``x_p`` of the time.

    Path ``p`` carries ``F_p = x_p C_p``; link ``(i, j)`` is active for
    ``F_p / cap(i, j)`` on its behalf.
    """
    lam: Dict[Link, Fraction] = {}
    flow: Dict[Link, Fraction] = {}
    for p, x in solution.active:
        f = x * p.capacity
        for e, c in zip(p.links, p.link_capacities):
            flow[e] = flow.get(e, _ZERO) + f
            lam[e] = lam.get(e, _ZERO) + f / c
    return LinkActivation(lam), LinkFlow(flow)
