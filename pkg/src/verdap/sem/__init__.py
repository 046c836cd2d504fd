"""Symbolic execution engine: configurations, the small-step relation,
eager pruning, and batch exploration."""

from .config import (
    Configuration,
    digit_string,
    Done,
    FAILED,
    FrameInfo,
    FrameReturn,
    FreshCounter,
    InvalidSchedule,
    leaves,
    NotSteppable,
    Obligation,
    obligations_in,
    OPEN,
    Parallel,
    PathCondition,
    PruneMap,
    replace_at,
    resolve,
    Schedule,
    schedules,
    Scope,
    Sequential,
    SymbolicStore,
    UnboundVariable,
    UNDECIDED,
)
from .engine import (
    CallMode,
    explore,
    ExploreResult,
    freshen,
    initial_config,
    mk_not,
    ObligationRecord,
    prune,
    resolve_subtree,
    run_to_break,
    RunResult,
    step,
    StopReason,
    substitute,
)

__all__ = [
    "CallMode",
    "Configuration",
    "Done",
    "ExploreResult",
    "FAILED",
    "FrameInfo",
    "FrameReturn",
    "FreshCounter",
    "InvalidSchedule",
    "NotSteppable",
    "Obligation",
    "ObligationRecord",
    "OPEN",
    "Parallel",
    "PathCondition",
    "PruneMap",
    "RunResult",
    "Schedule",
    "Scope",
    "Sequential",
    "StopReason",
    "SymbolicStore",
    "UNDECIDED",
    "UnboundVariable",
    "digit_string",
    "explore",
    "freshen",
    "initial_config",
    "leaves",
    "mk_not",
    "obligations_in",
    "prune",
    "replace_at",
    "resolve",
    "resolve_subtree",
    "run_to_break",
    "schedules",
    "step",
    "substitute",
]
