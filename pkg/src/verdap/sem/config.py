"""Execution state of the symbolic engine: scoped symbolic stores, path
conditions, the configuration tree (sequential branches, parallel
compositions, proof obligations, finished branches), schedules addressing
parallel children, and the fresh-variable counter.

Configurations are plain immutable recursive values; stepping and pruning
build new trees and share untouched subtrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from ..lang.ast import (
    Binary,
    BinOp,
    Expr,
    LogicVar,
    ObligationKind,
    Sort,
    SourceLoc,
    pretty,
    TRUE,
)

Schedule = tuple[int, ...]


def digit_string(schedule: Schedule) -> str:
    """Hierarchical thread name: schedule (0, 1) -> "01"."""
    return "".join(str(i) for i in schedule)


class UnboundVariable(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)


class InvalidSchedule(Exception):
    pass


class NotSteppable(Exception):
    pass


# ---------------------------------------------------------------------------
# Stores
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scope:
    kind: str  # "globals" | "frame"
    bindings: dict[str, Expr]


@dataclass(frozen=True)
class SymbolicStore:
    """Program variables mapped to logical expressions, innermost scope
    winning. Bound expressions never contain program variables."""

    scopes: tuple[Scope, ...]

    def lookup(self, name: str) -> Expr:
        for scope in reversed(self.scopes):
            if name in scope.bindings:
                return scope.bindings[name]
        raise UnboundVariable(name)

    def lookup_global(self, name: str) -> Expr:
        if self.scopes and name in self.scopes[0].bindings:
            return self.scopes[0].bindings[name]
        raise UnboundVariable(name)

    def has(self, name: str) -> bool:
        return any(name in scope.bindings for scope in self.scopes)

    def bound_names(self) -> frozenset[str]:
        names: set[str] = set()
        for scope in self.scopes:
            names.update(scope.bindings)
        return frozenset(names)

    def assign(self, name: str, value: Expr) -> "SymbolicStore":
        """Rebind `name` in the innermost scope that currently binds it."""
        for i in range(len(self.scopes) - 1, -1, -1):
            if name in self.scopes[i].bindings:
                scope = self.scopes[i]
                new_scope = Scope(scope.kind, {**scope.bindings, name: value})
                return SymbolicStore(self.scopes[:i] + (new_scope,) + self.scopes[i + 1 :])
        raise UnboundVariable(name)

    def bind_innermost(self, name: str, value: Expr) -> "SymbolicStore":
        scope = self.scopes[-1]
        new_scope = Scope(scope.kind, {**scope.bindings, name: value})
        return SymbolicStore(self.scopes[:-1] + (new_scope,))

    def push_scope(self, kind: str, bindings: dict[str, Expr]) -> "SymbolicStore":
        return SymbolicStore(self.scopes + (Scope(kind, dict(bindings)),))

    def drop_from(self, scope_index: int) -> "SymbolicStore":
        return SymbolicStore(self.scopes[:scope_index])


# ---------------------------------------------------------------------------
# Path conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathCondition:
    """Insertion-ordered conjunction of branch constraints over logic
    variables; the empty list reads as true."""

    conjuncts: tuple[Expr, ...] = ()

    def and_(self, e: Expr) -> "PathCondition":
        if e == TRUE:
            return self  # conjoining true is identity; keeps display clean
        return PathCondition(self.conjuncts + (e,))

    def as_expr(self) -> Expr:
        if not self.conjuncts:
            return TRUE
        out = self.conjuncts[0]
        for c in self.conjuncts[1:]:
            out = Binary(BinOp.AND, out, c)
        return out

    def render(self) -> str:
        return pretty(self.as_expr())


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrameInfo:
    proc_name: str
    call_site: Optional[SourceLoc]  # absent on the bottom frame
    scope_index: int  # index of this frame's scope in the store


@dataclass(frozen=True)
class Sequential:
    store: SymbolicStore
    path: PathCondition
    rest: tuple  # statements still to execute (language Stmts + FrameReturn)
    frames: tuple[FrameInfo, ...]


@dataclass(frozen=True)
class Parallel:
    children: tuple["Configuration", ...]


OPEN = "open"
FAILED = "failed"
UNDECIDED = "unknown"


@dataclass(frozen=True)
class Obligation:
    """A check that `negated` is impossible under `path`: the obligation
    discharges when path-and-negated is unsatisfiable."""

    path: PathCondition
    negated: Expr
    kind: ObligationKind
    at: SourceLoc
    status: str = OPEN  # "open" | "failed" | "unknown"
    model: Optional[dict[LogicVar, object]] = None  # countermodel iff failed

    def query(self) -> Expr:
        return Binary(BinOp.AND, self.path.as_expr(), self.negated)


@dataclass(frozen=True)
class Done:
    store: SymbolicStore
    path: PathCondition


Configuration = Union[Sequential, Parallel, Obligation, Done]


@dataclass(frozen=True)
class FrameReturn:
    """Engine-internal epilogue of an inlined call: pops the callee frame
    and moves its `result` binding into `target`."""

    target: Optional[str]
    loc: SourceLoc


# ---------------------------------------------------------------------------
# Fresh logical variables
# ---------------------------------------------------------------------------


class FreshCounter:
    """Globally unique logic-variable indices; strictly increasing."""

    def __init__(self, start: int = 0):
        self.next_index = start

    def fresh(self, name: str, sort: Sort) -> LogicVar:
        var = LogicVar(name, self.next_index, sort)
        self.next_index += 1
        return var

    @property
    def value(self) -> int:
        return self.next_index

    def restore(self, value: int) -> None:
        self.next_index = value


# ---------------------------------------------------------------------------
# Tree navigation
# ---------------------------------------------------------------------------


def resolve(config: Configuration, schedule: Schedule) -> Configuration:
    """The sub-configuration addressed by `schedule` (a non-Parallel node)."""
    node = config
    for index in schedule:
        if not isinstance(node, Parallel):
            raise InvalidSchedule(f"schedule {schedule} descends into a leaf")
        if not 0 <= index < len(node.children):
            raise InvalidSchedule(f"index {index} out of range in schedule {schedule}")
        node = node.children[index]
    if isinstance(node, Parallel):
        raise InvalidSchedule(f"schedule {schedule} stops at a parallel node")
    return node


def replace_at(
    config: Configuration, schedule: Schedule, new: Configuration
) -> Configuration:
    if not schedule:
        return new
    if not isinstance(config, Parallel):
        raise InvalidSchedule(f"schedule descends into a leaf")
    index = schedule[0]
    if not 0 <= index < len(config.children):
        raise InvalidSchedule(f"index {index} out of range")
    child = replace_at(config.children[index], schedule[1:], new)
    children = config.children[:index] + (child,) + config.children[index + 1 :]
    return Parallel(children)


def schedules(config: Configuration) -> list[Schedule]:
    """All schedules addressing steppable leaves (sequential branches with
    work left), in tree order. Obligations and finished branches cannot
    step and are excluded."""
    out: list[Schedule] = []

    def walk(node: Configuration, prefix: Schedule) -> None:
        if isinstance(node, Parallel):
            for i, child in enumerate(node.children):
                walk(child, prefix + (i,))
        elif isinstance(node, Sequential) and node.rest:
            out.append(prefix)

    walk(config, ())
    return out


def leaves(config: Configuration) -> Iterator[tuple[Schedule, Configuration]]:
    """All non-Parallel nodes with their tree positions, in tree order."""
    if isinstance(config, Parallel):
        for i, child in enumerate(config.children):
            for pos, leaf in leaves(child):
                yield (i,) + pos, leaf
    else:
        yield (), config


def obligations_in(config: Configuration) -> list[tuple[Schedule, Obligation]]:
    return [(pos, leaf) for pos, leaf in leaves(config) if isinstance(leaf, Obligation)]


# ---------------------------------------------------------------------------
# Prune bookkeeping
# ---------------------------------------------------------------------------


@dataclass
class PruneMap:
    """Old-to-new child index mapping for one pruned Parallel node, with
    nested maps for surviving children and the removed subtrees kept for
    reporting."""

    index_map: dict[int, int] = field(default_factory=dict)
    children: dict[int, "PruneMap"] = field(default_factory=dict)
    removed: dict[int, Configuration] = field(default_factory=dict)

    def remap(self, schedule: Schedule) -> Optional[Schedule]:
        """Translate a pre-prune schedule; None if its node was removed.
        Prefixes ending above a leaf translate as far as they go."""
        if not schedule:
            return ()
        index = schedule[0]
        if index in self.removed:
            return None
        if index not in self.index_map:
            return None
        new_index = self.index_map[index]
        child = self.children.get(index)
        if child is None:
            return (new_index,) + schedule[1:]
        rest = child.remap(schedule[1:])
        if rest is None:
            return None
        return (new_index,) + rest

    def removed_nodes(self) -> list[Configuration]:
        out = list(self.removed.values())
        for child in self.children.values():
            out.extend(child.removed_nodes())
        return out
