"""Exact approximate-capacity computations for 1-2-1 (beam-steered) relay networks."""

from .capacity import CapacityResult, LinkActivation, LinkFlow, fd_capacity, min_cut_value
from .diamond import (
    DiamondNetwork,
    best_relay_guarantee,
    diamond_capacity,
    fd_relay_selection,
    hd_relay_selection,
    hd_schedule,
    solve_p4,
)
from .errors import (
    InvalidInputError,
    NotFoundError,
    OneTwoOneError,
    ScheduleInfeasibleError,
    SizeLimitError,
    UnsupportedModeError,
)
from .lpsolve import LinearProgram, VertexSolution, solve_lp
from .model import (
    DuplexMode,
    Network,
    Rational,
    diamond_network,
    gap,
    line_network,
    rationalize,
    validate,
)
from .oracle import brute_force_capacity, enumerate_states, exhaustive_min_cut
from .paths import Path, best_path, enumerate_paths, solve_p1, sparsity_report
from .scheduler import (
    NetworkState,
    Schedule,
    bvn_schedule,
    lcm_coloring,
    lcm_coloring_schedule,
    schedule_rate,
    simulate,
)

__all__ = [
    "CapacityResult", "LinkActivation", "LinkFlow", "fd_capacity", "min_cut_value",
    "DiamondNetwork", "best_relay_guarantee", "diamond_capacity", "fd_relay_selection",
    "hd_relay_selection", "hd_schedule", "solve_p4",
    "InvalidInputError", "NotFoundError", "OneTwoOneError", "ScheduleInfeasibleError",
    "SizeLimitError", "UnsupportedModeError",
    "LinearProgram", "VertexSolution", "solve_lp",
    "DuplexMode", "Network", "Rational", "diamond_network", "gap", "line_network",
    "rationalize", "validate",
    "brute_force_capacity", "enumerate_states", "exhaustive_min_cut",
    "Path", "best_path", "enumerate_paths", "solve_p1", "sparsity_report",
    "NetworkState", "Schedule", "bvn_schedule", "lcm_coloring", "lcm_coloring_schedule",
    "schedule_rate", "simulate",
]
