"""Full-duplex approximate capacity through the link-activation flow LP.

The LP has one activation fraction and one flow per link::

    maximize    sum_j F[0, j]
    subject to  F[i, j] <= lam[i, j] * cap[i, j]
                sum_j lam[i, j] <= 1           (node i transmits at most 100%)
                sum_i lam[i, j] <= 1           (node j receives at most 100%)
                flow conservation at every relay

Its size is polynomial in the number of nodes, unlike the state-based
formulation in :mod:`onetwoone.oracle`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Set, Tuple

from .errors import InvalidInputError, UnsupportedModeError
from .lpsolve import LPBuilder, LinearProgram, VertexSolution, solve_lp
from .model import DuplexMode, Link, Network, as_fraction, require_valid

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LinkActivation:
    """Fraction of time each link is switched on (doubly substochastic)."""

    fractions: Mapping[Link, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {e: as_fraction(v) for e, v in self.fractions.items()}
        object.__setattr__(self, "fractions", dict(sorted(clean.items())))

    def __getitem__(self, link: Link) -> Fraction:
        return self.fractions.get(link, _ZERO)

    def support(self) -> List[Link]:
        return [e for e, v in self.fractions.items() if v > 0]

    def transmit_load(self) -> Dict[int, Fraction]:
        load: Dict[int, Fraction] = {}
        for (i, _), v in self.fractions.items():
            load[i] = load.get(i, _ZERO) + v
        return load

    def receive_load(self) -> Dict[int, Fraction]:
        load: Dict[int, Fraction] = {}
        for (_, j), v in self.fractions.items():
            load[j] = load.get(j, _ZERO) + v
        return load

    def budget_violations(self) -> List[str]:
        problems = []
        for e, v in self.fractions.items():
            if v < 0:
                problems.append(f"link {e[0]}->{e[1]}: negative activation {v}")
            if v > 1:
                problems.append(f"link {e[0]}->{e[1]}: activation {v} exceeds 1")
        for i, load in self.transmit_load().items():
            if load > 1:
                problems.append(f"node {i} transmits for {load} of the time")
        for j, load in self.receive_load().items():
            if load > 1:
                problems.append(f"node {j} receives for {load} of the time")
        return problems

    def check_budgets(self) -> None:
        problems = self.budget_violations()
        if problems:
            raise InvalidInputError("; ".join(problems))


@dataclass(frozen=True)
class LinkFlow:
    flows: Mapping[Link, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {e: as_fraction(v) for e, v in self.flows.items()}
        object.__setattr__(self, "flows", dict(sorted(clean.items())))

    def __getitem__(self, link: Link) -> Fraction:
        return self.flows.get(link, _ZERO)

    def out_of(self, node: int) -> Fraction:
        return sum((v for (i, _), v in self.flows.items() if i == node), _ZERO)

    def into(self, node: int) -> Fraction:
        return sum((v for (_, j), v in self.flows.items() if j == node), _ZERO)

    def conservation_violations(self, n_relays: int) -> List[int]:
        return [k for k in range(1, n_relays + 1) if self.out_of(k) != self.into(k)]


@dataclass(frozen=True)
class CapacityResult:
    value: Fraction
    activation: LinkActivation
    flow: LinkFlow
    lp: LinearProgram = field(repr=False, compare=False, default=None)
    vertex: VertexSolution = field(repr=False, compare=False, default=None)

    # (value, activation, flow) unpacking
    def __iter__(self):
        return iter((self.value, self.activation, self.flow))


def useful_links(network: Network) -> List[Link]:
    """Positive-capacity links lying on some source-to-destination walk."""
    links = network.active_links()
    dest = network.destination
    succ: Dict[int, List[int]] = {}
    pred: Dict[int, List[int]] = {}
    for i, j in links:
        succ.setdefault(i, []).append(j)
        pred.setdefault(j, []).append(i)

    def closure(start, adj):
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    from_source = closure(0, succ)
    to_dest = closure(dest, pred)
    return [(i, j) for i, j in links if i in from_source and j in to_dest]


def flow_lp(network: Network, links: List[Link]) -> Tuple[LinearProgram, List[str]]:
    b = LPBuilder()
    lam = {e: b.var(("lam", e)) for e in links}
    flow = {e: b.var(("flow", e)) for e in links}
    b.maximize({flow[e]: 1 for e in links if e[0] == 0})
    for e in links:
        b.add_le({flow[e]: 1, lam[e]: -network.capacity(*e)}, 0)
    for i in sorted({e[0] for e in links}):
        b.add_le({lam[e]: 1 for e in links if e[0] == i}, 1)
    for j in sorted({e[1] for e in links}):
        b.add_le({lam[e]: 1 for e in links if e[1] == j}, 1)
    for k in network.relays:
        terms = {}
        for e in links:
            if e[0] == k:
                terms[flow[e]] = terms.get(flow[e], 0) + 1
            if e[1] == k:
                terms[flow[e]] = terms.get(flow[e], 0) - 1
        if terms:
            b.add_eq(terms, 0)
    return b.build(), b.names


def fd_capacity(network: Network) -> CapacityResult:
    """Approximate capacity of a full-duplex network with its optimal activation.

    Returns ``(value, activation, flow)``; the activation/flow pair is a
    vertex of the flow LP.  A network with no source-destination route has
    value 0.
    """
    require_valid(network)
    if network.mode is not DuplexMode.FD:
        raise UnsupportedModeError("fd_capacity needs a full-duplex network")
    links = useful_links(network)
    if not links:
        return CapacityResult(_ZERO, LinkActivation(), LinkFlow())
    lp, names = flow_lp(network, links)
    sol = solve_lp(lp)
    lam, flow = {}, {}
    for (kind, e), v in zip(names, sol.values):
        (lam if kind == "lam" else flow)[e] = v
    return CapacityResult(sol.objective_value, LinkActivation(lam), LinkFlow(flow), lp, sol)


def max_flow(
    n_nodes: int, capacities: Mapping[Link, Fraction], source: int, sink: int
) -> Tuple[Fraction, Dict[Link, Fraction], Set[int]]:
    """Edmonds-Karp max-flow over exact capacities.

    Returns the flow value, the per-edge flow, and the source side of a
    minimum cut (nodes reachable in the final residual graph).
    """
    residual: Dict[int, Dict[int, Fraction]] = {u: {} for u in range(n_nodes)}
    for (i, j), c in capacities.items():
        if c > 0:
            residual[i][j] = residual[i].get(j, _ZERO) + c
            residual[j].setdefault(i, _ZERO)
    total = _ZERO
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in sorted(residual[u]):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        push = None
        v = sink
        while parent[v] is not None:
            u = parent[v]
            push = residual[u][v] if push is None else min(push, residual[u][v])
            v = u
        v = sink
        while parent[v] is not None:
            u = parent[v]
            residual[u][v] -= push
            residual[v][u] += push
            v = u
        total += push
    flows = {}
    for (i, j), c in capacities.items():
        if c > 0:
            # antiparallel links share one residual pair; keep only the net direction
            flows[(i, j)] = max(_ZERO, c - residual[i][j])
    return total, flows, set(parent)


def min_cut_value(network: Network, activation: LinkActivation) -> Tuple[Fraction, FrozenSet[int]]:
    """Minimum cut of the network with link capacities scaled by activation.

    Computed as a max-flow (duality); the returned node set is the source
    side of a minimizing cut.
    """
    scaled = {e: activation[e] * c for e, c in network.links.items() if c > 0 and activation[e] > 0}
    value, _, side = max_flow(network.n_relays + 2, scaled, 0, network.destination)
    return value, frozenset(side)


def cut_value(network: Network, activation: LinkActivation, side) -> Fraction:
    side = set(side)
    return sum(
        (activation[e] * c for e, c in network.links.items() if e[0] in side and e[1] not in side),
        _ZERO,
    )
