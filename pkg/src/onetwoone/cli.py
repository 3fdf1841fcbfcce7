"""Command-line front end.

Networks are read from JSON documents::

    {"n_relays": 1, "mode": "fd", "epsilon": "1/1000",
     "links": [{"from": 0, "to": 1, "capacity": "2"},
               {"from": 1, "to": 2, "capacity": "3"}]}

Capacities are exact rationals ("p/q" or integers).  Decimal strings are
accepted too and are rounded down onto a grid fine enough that the
computed capacity is within ``epsilon`` of the exact one.

Exit codes: 0 success, 1 failed check, 2 bad input, 3 unsupported mode,
4 size limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .capacity import fd_capacity, min_cut_value
from .diamond import (
    DiamondNetwork,
    diamond_capacity,
    hd_flow,
    hd_schedule,
    solve_p4,
)
from .errors import InvalidInputError, SizeLimitError, UnsupportedModeError
from .model import DuplexMode, Network, gap, rationalize, require_valid
from .oracle import DEFAULT_MAX_STATES, brute_force_capacity, exhaustive_min_cut
from .paths import DEFAULT_MAX_PATHS, best_path, solve_p1, sparsity_report
from .scheduler import NetworkState, Schedule, bvn_schedule, schedule_rate, simulate

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_MODE = 3
EXIT_SIZE = 4

DEFAULT_EPSILON = Fraction(1, 1000)


def fmt(value: Fraction) -> str:
    """Exact value followed by a 6-significant-digit decimal."""
    return f"{value} ({float(value):#.6g})"


def parse_rational(text: Any, where: str) -> Tuple[Fraction, bool]:
    """Parse a capacity string; the flag says whether it was a decimal."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InvalidInputError(f"{where}: expected a string like \"3/2\", got {text!r}")
    s = str(text).strip()
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"{where}: cannot parse {s!r} as a rational or decimal") from None
    decimal = "/" not in s and any(c in s for c in ".eE")
    return value, decimal


def _field(doc: Dict, key: str, where: str):
    if key not in doc:
        raise InvalidInputError(f"{where}: missing field {key!r}")
    return doc[key]


def _int_field(doc: Dict, key: str, where: str) -> int:
    value = _field(doc, key, where)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInputError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def network_from_document(doc: Any, epsilon: Optional[Fraction] = None) -> Network:
    """Build a validated :class:`Network` from a parsed NetworkDocument."""
    if not isinstance(doc, dict):
        raise InvalidInputError("document: expected a JSON object")
    n = _int_field(doc, "n_relays", "document")
    if n < 0:
        raise InvalidInputError("document.n_relays: must be nonnegative")
    mode_text = doc.get("mode", "fd")
    try:
        mode = DuplexMode(mode_text)
    except ValueError:
        raise InvalidInputError(f"document.mode: expected \"fd\" or \"hd\", got {mode_text!r}") from None
    if epsilon is None:
        epsilon, _ = parse_rational(doc.get("epsilon", str(DEFAULT_EPSILON)), "document.epsilon")
    if epsilon <= 0:
        raise InvalidInputError("document.epsilon: must be positive")
    links = _field(doc, "links", "document")
    if not isinstance(links, list):
        raise InvalidInputError("document.links: expected a list")
    exact: Dict[Tuple[int, int], Fraction] = {}
    decimal: Dict[Tuple[int, int], Fraction] = {}
    for k, item in enumerate(links):
        where = f"links[{k}]"
        if not isinstance(item, dict):
            raise InvalidInputError(f"{where}: expected an object with from/to/capacity")
        i = _int_field(item, "from", where)
        j = _int_field(item, "to", where)
        value, is_decimal = parse_rational(_field(item, "capacity", where), f"{where}.capacity")
        if (i, j) in exact or (i, j) in decimal:
            raise InvalidInputError(f"{where}: duplicate link {i}->{j}")
        (decimal if is_decimal else exact)[(i, j)] = value
    if decimal:
        exact.update(rationalize(decimal, n, epsilon, mode).links)
    network = Network(n, exact, mode)
    try:
        require_valid(network)
    except InvalidInputError as exc:
        raise InvalidInputError(f"document: {exc}") from None
    return network


def load_network(path: str, epsilon: Optional[Fraction] = None) -> Network:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return network_from_document(doc, epsilon)


def schedule_to_json(schedule: Schedule) -> List[Dict]:
    return [
        {"duration": str(d), "active_links": [[i, j] for i, j in state]}
        for state, d in schedule
    ]


def schedule_from_json(doc: Any) -> Schedule:
    if isinstance(doc, dict):
        doc = _field(doc, "schedule", "document")
    if not isinstance(doc, list):
        raise InvalidInputError("schedule: expected a list of states")
    entries = []
    for k, item in enumerate(doc):
        where = f"schedule[{k}]"
        if not isinstance(item, dict):
            raise InvalidInputError(f"{where}: expected an object")
        duration, _ = parse_rational(_field(item, "duration", where), f"{where}.duration")
        links = _field(item, "active_links", where)
        try:
            state = NetworkState((int(i), int(j)) for i, j in links)
        except (TypeError, ValueError):
            raise InvalidInputError(f"{where}.active_links: expected [[i, j], ...]") from None
        entries.append((state, duration))
    return Schedule(entries)


def _emit(args, human: List[str], machine: Dict) -> None:
    if args.json:
        print(json.dumps(machine, indent=2))
    else:
        print("\n".join(human))


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _hd_general(network: Network, args) -> Tuple[Fraction, Schedule]:
    _warn(
        "half-duplex capacity of a non-diamond network is computed by enumerating "
        f"every network state; this is exponential in the number of relays (cap {args.max_states})"
    )
    return brute_force_capacity(network, args.max_states)


def cmd_capacity(args) -> int:
    network = load_network(args.file, args.epsilon)
    diamond = DiamondNetwork.from_network(network)
    if network.mode is DuplexMode.FD:
        value = fd_capacity(network).value
    elif diamond is not None:
        value = diamond_capacity(diamond).value
    else:
        value, _ = _hd_general(network, args)
    human = [f"capacity = {fmt(value)}"]
    machine: Dict[str, Any] = {"capacity": str(value), "decimal": float(value)}
    if args.gap:
        g = gap(network.n_relays, network.mode)
        human.append(f"gap = {g:#.6g} bits ({network.mode.value}, N = {network.n_relays})")
        human.append(f"true capacity lies in [{float(value):#.6g}, {float(value) + g:#.6g}]")
        machine["gap"] = g
        machine["bracket"] = [float(value), float(value) + g]
    _emit(args, human, machine)
    return EXIT_OK


def _schedule_and_flow(network: Network):
    if network.mode is DuplexMode.FD:
        result = fd_capacity(network)
        return result.value, bvn_schedule(result.activation, network.n_relays), result.flow
    diamond = DiamondNetwork.from_network(network)
    if diamond is None:
        raise UnsupportedModeError(
            "explicit half-duplex schedules are only built for diamond networks "
            "(source -> relays -> destination); use 'capacity' for the value"
        )
    sol = diamond_capacity(diamond)
    return sol.value, hd_schedule(diamond), hd_flow(diamond, sol.x)


def cmd_schedule(args) -> int:
    network = load_network(args.file, args.epsilon)
    value, schedule, flow = _schedule_and_flow(network)
    human = [f"capacity = {fmt(value)}", f"{len(schedule)} state(s):"]
    for state, d in schedule:
        links = ", ".join(f"{i}->{j}" for i, j in state) or "idle"
        human.append(f"  {fmt(d):>28}  {links}")
    machine: Dict[str, Any] = {"capacity": str(value), "schedule": schedule_to_json(schedule)}
    if args.verify:
        rate = simulate(network, schedule, flow)
        human.append(f"verified rate = {fmt(rate)}")
        machine["verified_rate"] = str(rate)
    _emit(args, human, machine)
    return EXIT_OK


def cmd_paths(args) -> int:
    network = load_network(args.file, args.epsilon)
    if network.mode is not DuplexMode.FD:
        raise UnsupportedModeError("path utilizations are defined for full-duplex networks only")
    sol = solve_p1(network, args.max_paths)
    report = sparsity_report(sol, network)
    human = [f"capacity = {fmt(sol.value)}", f"{len(sol.paths)} path(s), {report.active_count} active:"]
    rows = []
    for p, x in sol.active:
        human.append(f"  {str(p):<20} x = {fmt(x):<28} C_p = {fmt(p.capacity)}")
        rows.append({"path": list(p.nodes), "x": str(x), "capacity": str(p.capacity)})
    human.append(
        f"sparsity: {report.active_count} active <= 2N+2 = {report.general_bound}: "
        + ("ok" if report.general_ok else "VIOLATED")
    )
    machine: Dict[str, Any] = {"capacity": str(sol.value), "paths": rows}
    if report.layers is not None:
        human.append(
            f"2-layer network with M = {report.layers}: {report.active_count} active <= 2M+1 = "
            f"{report.bound}: " + ("ok" if report.ok else "exceeded (soft check)")
        )
        machine["two_layer_bound"] = {"M": report.layers, "bound": report.bound, "ok": report.ok}
    if sol.paths:
        path, width = best_path(network)
        ratio = width / sol.value
        human.append(
            f"best path {path}: {fmt(width)}, ratio to capacity {fmt(ratio)} "
            f"(guaranteed >= 1/{2 * network.n_relays + 2})"
        )
        machine["best_path"] = {"path": list(path.nodes), "capacity": str(width), "ratio": str(ratio)}
    _emit(args, human, machine)
    return EXIT_OK


def _check_rows(network: Network, args) -> List[Tuple[str, Fraction]]:
    rows = []
    if network.mode is DuplexMode.FD:
        result = fd_capacity(network)
        rows.append(("flow LP", result.value))
        rows.append(("path LP", solve_p1(network, args.max_paths).value))
        rows.append(("min cut", min_cut_value(network, result.activation)[0]))
    else:
        diamond = DiamondNetwork.from_network(network)
        if diamond is not None:
            value, _ = solve_p4(diamond)
            rows.append(("activation LP", value))
            rows.append(("relay LP", diamond_capacity(diamond).value))
            rows.append(("schedule rate", schedule_rate(network, hd_schedule(diamond))))
    value, schedule = brute_force_capacity(network, args.max_states)
    rows.append(("state LP", value))
    rows.append(("state cuts", exhaustive_min_cut(network, schedule)[0]))
    return rows


def cmd_check(args) -> int:
    network = load_network(args.file, args.epsilon)
    rows = _check_rows(network, args)
    agree = len({v for _, v in rows}) == 1
    human = [f"{name:<14} {fmt(v)}" for name, v in rows]
    human.append("PASS" if agree else "FAIL")
    machine = {"values": {name: str(v) for name, v in rows}, "pass": agree}
    _emit(args, human, machine)
    return EXIT_OK if agree else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    network = load_network(args.file, args.epsilon)
    try:
        with open(args.schedule) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"{args.schedule}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{args.schedule}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    schedule = schedule_from_json(doc)
    rate = schedule_rate(network, schedule)
    _emit(args, [f"schedule rate = {fmt(rate)}"], {"rate": str(rate)})
    return EXIT_OK


def _positive_rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onetwoone",
        description="Exact capacity, schedules and path analysis for 1-2-1 relay networks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="network JSON document")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--epsilon", type=_positive_rational, default=None,
                        help="rationalization tolerance for decimal capacities (overrides the file)")
    common.add_argument("--max-paths", type=int, default=DEFAULT_MAX_PATHS)
    common.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", parents=[common], help="approximate capacity")
    p.add_argument("--gap", action="store_true", help="also print the constant-gap bracket")
    p.set_defaults(run=cmd_capacity)

    p = sub.add_parser("schedule", parents=[common], help="optimal time-sharing schedule")
    p.add_argument("--verify", action="store_true", help="replay the schedule and print its rate")
    p.set_defaults(run=cmd_schedule)

    p = sub.add_parser("paths", parents=[common], help="active paths, sparsity and best path")
    p.set_defaults(run=cmd_paths)

    p = sub.add_parser("check", parents=[common], help="cross-check all formulations")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("verify", parents=[common], help="rate of a saved schedule")
    p.add_argument("schedule", help="schedule JSON (as printed by 'schedule --json')")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UnsupportedModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
