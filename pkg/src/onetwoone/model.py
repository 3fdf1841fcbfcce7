"""Core types for 1-2-1 relay networks.

Nodes are integers: ``0`` is the source, ``1..N`` are relays and ``N + 1``
is the destination.  A link ``(i, j)`` carries data from node ``i`` to
node ``j``; its capacity is stored as an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from .errors import InvalidInputError

# Python's Fraction already keeps numerator/denominator canonical with
# arbitrary-precision integers, which is exactly what the LCM step needs.
Rational = Fraction

Link = Tuple[int, int]
Number = Union[int, Fraction, float, Decimal, str]


class DuplexMode(str, Enum):
    FD = "fd"
    HD = "hd"

    @property
    def label(self) -> str:
        return "full-duplex" if self is DuplexMode.FD else "half-duplex"


def as_fraction(value: Number) -> Fraction:
    """Convert ``value`` to an exact fraction.

    Floats are converted exactly (binary expansion), strings go through the
    ``Fraction`` parser so ``"3/4"`` and ``"0.75"`` both work.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInputError("booleans are not capacities")
    if isinstance(value, float) and not math.isfinite(value):
        raise InvalidInputError(f"non-finite value {value!r}")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"cannot interpret {value!r} as a rational") from exc


@dataclass(frozen=True, eq=False)
class Network:
    """Directed 1-2-1 network with exact link capacities.

    ``links`` maps ``(i, j)`` to the capacity of the link from ``i`` to
    ``j``.  Missing links have capacity zero.  The constructor does not
    reject malformed links; use :func:`validate` to list problems.
    """

    n_relays: int
    links: Mapping[Link, Fraction] = field(default_factory=dict)
    mode: DuplexMode = DuplexMode.FD

    def __post_init__(self):
        if isinstance(self.n_relays, bool) or not isinstance(self.n_relays, int) or self.n_relays < 0:
            raise InvalidInputError(f"n_relays must be a nonnegative integer, got {self.n_relays!r}")
        links = {(int(i), int(j)): as_fraction(c) for (i, j), c in self.links.items()}
        object.__setattr__(self, "links", dict(sorted(links.items())))
        object.__setattr__(self, "mode", DuplexMode(self.mode))

    @property
    def destination(self) -> int:
        return self.n_relays + 1

    @property
    def nodes(self) -> range:
        return range(self.n_relays + 2)

    @property
    def relays(self) -> range:
        return range(1, self.n_relays + 1)

    def capacity(self, i: int, j: int) -> Fraction:
        return self.links.get((i, j), Fraction(0))

    def active_links(self) -> List[Link]:
        """Links with strictly positive capacity, in sorted order."""
        return [e for e, c in self.links.items() if c > 0]

    def with_mode(self, mode: DuplexMode) -> "Network":
        return Network(self.n_relays, self.links, DuplexMode(mode))

    def scaled(self, k) -> "Network":
        k = as_fraction(k)
        return Network(self.n_relays, {e: c * k for e, c in self.links.items()}, self.mode)

    def replace_capacity(self, link: Link, value) -> "Network":
        links = dict(self.links)
        links[link] = as_fraction(value)
        return Network(self.n_relays, links, self.mode)

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.n_relays == other.n_relays
            and self.mode == other.mode
            and dict(self.active_links_items()) == dict(other.active_links_items())
        )

    def __hash__(self):
        return hash((self.n_relays, self.mode, frozenset(self.active_links_items())))

    def active_links_items(self):
        return [(e, c) for e, c in self.links.items() if c > 0]

    def __repr__(self):
        body = ", ".join(f"{i}->{j}: {c}" for (i, j), c in self.links.items())
        return f"Network(N={self.n_relays}, {self.mode.value}, {{{body}}})"


@dataclass(frozen=True)
class ChannelSpec:
    """Complex channel gains ``h[(i, j)]`` (from ``i`` to ``j``) and a power budget."""

    gains: Mapping[Link, complex]
    power: float

    def __post_init__(self):
        if not (math.isfinite(self.power) and self.power > 0):
            raise InvalidInputError(f"power must be positive and finite, got {self.power!r}")

    def capacities(self) -> Dict[Link, float]:
        return {e: link_capacity_from_channel(h, self.power) for e, h in self.gains.items()}


def link_capacity_from_channel(h: complex, power: float) -> float:
    """Point-to-point capacity ``log2(1 + P |h|^2)`` in bits per channel use."""
    h = complex(h)
    if not (math.isfinite(h.real) and math.isfinite(h.imag)):
        raise InvalidInputError(f"non-finite channel gain {h!r}")
    if not math.isfinite(power) or power <= 0:
        raise InvalidInputError(f"power must be positive and finite, got {power!r}")
    return math.log2(1.0 + power * abs(h) ** 2)


def _truncate(value: Fraction, bound: Fraction) -> Fraction:
    # smallest power of ten whose grid spacing fits under the bound
    q = 1
    while Fraction(1, q) > bound:
        q *= 10
    return Fraction(math.floor(value * q), q)


def rationalize(
    real_caps: Mapping[Link, Number],
    n_relays: int,
    epsilon,
    mode: DuplexMode = DuplexMode.FD,
) -> Network:
    """Round real link capacities down onto a decimal grid.

    Every returned capacity ``c`` satisfies ``c <= l <= c + epsilon/(N+1)^2``
    for the real value ``l`` it replaces, so the approximate capacity of the
    returned network is within ``epsilon`` below the real one.  Floats are
    taken at their exact binary value, so the guarantee holds without any
    floating-point slack.
    """
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    bound = epsilon / (n_relays + 1) ** 2
    links = {}
    for link, value in real_caps.items():
        exact = as_fraction(value)
        if exact < 0:
            raise InvalidInputError(f"negative capacity on link {link}")
        links[link] = _truncate(exact, bound)
    return Network(n_relays, links, mode)


def relay_state_count(n_relays: int, mode: DuplexMode) -> int:
    """Number of beam configurations a single relay can take."""
    mode = DuplexMode(mode)
    return (n_relays + 1) ** 2 if mode is DuplexMode.FD else 2 * n_relays + 1


def gap(n_relays: int, mode: DuplexMode) -> float:
    """Constant gap (bits) between the approximate capacity and the true capacity."""
    if n_relays < 0:
        raise InvalidInputError("n_relays must be nonnegative")
    n = n_relays
    card = relay_state_count(n, mode)
    return (n + 1) * math.log2(math.e) + 2 * math.log2(n + 2) + n * math.log2(card)


def validate(network: Network) -> List[str]:
    """List structural problems; an empty list means the network is well formed."""
    problems = []
    dest = network.destination
    for (i, j), c in network.links.items():
        if not (0 <= i <= dest and 0 <= j <= dest):
            problems.append(f"link {i}->{j}: unknown node (valid range 0..{dest})")
            continue
        if i == j:
            problems.append(f"link {i}->{j}: self-loop")
        if j == 0:
            problems.append(f"link {i}->{j}: link into source")
        if i == dest:
            problems.append(f"link {i}->{j}: link out of destination")
        if c < 0:
            problems.append(f"link {i}->{j}: negative capacity {c}")
    return problems


def require_valid(network: Network) -> None:
    problems = validate(network)
    if problems:
        raise InvalidInputError("; ".join(problems))


def line_network(*capacities, mode: DuplexMode = DuplexMode.FD) -> Network:
    """Chain ``0 -> 1 -> ... -> N+1`` with the given link capacities."""
    n = len(capacities) - 1
    return Network(n, {(k, k + 1): c for k, c in enumerate(capacities)}, mode)


def diamond_network(pairs: Iterable[Tuple[Number, Number]], mode: DuplexMode = DuplexMode.FD) -> Network:
    """One layer of relays; ``pairs[k] = (source->relay, relay->destination)``."""
    pairs = list(pairs)
    dest = len(pairs) + 1
    links = {}
    for k, (left, right) in enumerate(pairs, start=1):
        links[(0, k)] = left
        links[(k, dest)] = right
    return Network(len(pairs), links, mode)
