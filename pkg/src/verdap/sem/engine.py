"""The schedule-indexed small-step rules of the symbolic engine.

Stepping replaces exactly the addressed sequential leaf by the rule's
successors, leaving every sibling subtree untouched:

  * assume e     -> (s, phi & s(e), rest)
  * assert e     -> (s, phi & s(e), rest) || obligation(phi, !s(e))
  * x = e        -> (s[x := s(e)], phi, rest)
  * if e         -> (s, phi & s(e), then;rest) || (s, phi & !s(e), else;rest)
  * while e inv I -> obligation(phi, !s(I))
                     || (s^, phi & s^(e) & s^(I), body; assert I)
                     || (s^, phi & !s^(e) & s^(I), rest)
    where s^ freshens the variables the loop body modifies
  * calls dispatch via the callee contract (mode "contract": check the
    precondition, havoc the result, assume the postcondition) or inline the
    body under a new frame (mode "inline": splice, then assert the
    postcondition and return)

Every division or modulo occurrence in an evaluated source expression emits
an extra division-by-zero obligation for its divisor. Pruning eagerly drops
unsatisfiable branches and decides obligations as they appear.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

from ..lang.ast import (
    Assert,
    Assign,
    Assume,
    Binary,
    BinOp,
    BoolLit,
    Call,
    Expr,
    If,
    IntLit,
    loc_of,
    LocalDecl,
    LogicVar,
    modified_vars,
    ObligationKind,
    Procedure,
    ProgVar,
    sort_of,
    SourceLoc,
    TranslationUnit,
    Unary,
    UnOp,
    While,
)
from ..solve import EvalDivisionByZero, eval_expr, Solver, Verdict
from .config import (
    Configuration,
    Done,
    FrameInfo,
    FrameReturn,
    FreshCounter,
    InvalidSchedule,
    leaves,
    NotSteppable,
    Obligation,
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
    FAILED,
    UNDECIDED,
)


class CallMode(Enum):
    CONTRACT = "contract"  # Next: dispatch calls through their contracts
    INLINE = "inline"  # StepIn: splice the body, disregard the contract


# ---------------------------------------------------------------------------
# Expression evaluation in a symbolic store
# ---------------------------------------------------------------------------


def mk_not(e: Expr) -> Expr:
    if isinstance(e, BoolLit):
        return BoolLit(not e.value)
    if isinstance(e, Unary) and e.op is UnOp.NOT:
        return e.arg
    return Unary(UnOp.NOT, e)


def _mk_unary(op: UnOp, arg: Expr) -> Expr:
    if op is UnOp.NOT:
        return mk_not(arg)
    if isinstance(arg, IntLit):
        return IntLit(-arg.value)
    if isinstance(arg, Unary) and arg.op is UnOp.NEG:
        return arg.arg
    return Unary(op, arg)


def _mk_binary(op: BinOp, left: Expr, right: Expr) -> Expr:
    if isinstance(left, (IntLit, BoolLit)) and isinstance(right, (IntLit, BoolLit)):
        try:
            value = eval_expr(Binary(op, left, right), {})
        except EvalDivisionByZero:
            return Binary(op, left, right)
        if isinstance(value, bool):
            return BoolLit(value)
        return IntLit(value)
    if op is BinOp.SUB and left == IntLit(0):
        return _mk_unary(UnOp.NEG, right)  # display 0 - t as the negation -t
    return Binary(op, left, right)


def substitute(store, e: Expr) -> Expr:
    """Evaluate program expression `e` in symbolic state `store`: replace
    every program variable by its binding and lightly fold literals.

    `store` may be a SymbolicStore or any callable name -> Expr.
    """
    lookup = store.lookup if isinstance(store, SymbolicStore) else store

    def walk(x: Expr) -> Expr:
        if isinstance(x, ProgVar):
            return lookup(x.name)
        if isinstance(x, Unary):
            return _mk_unary(x.op, walk(x.arg))
        if isinstance(x, Binary):
            return _mk_binary(x.op, walk(x.left), walk(x.right))
        return x

    return walk(e)


def freshen(
    store: SymbolicStore, names, counter: FreshCounter
) -> SymbolicStore:
    """Rebind each name to a brand-new logic variable of the same sort."""
    out = store
    for name in sorted(names):
        old = out.lookup(name)  # raises UnboundVariable when absent
        out = out.assign(name, counter.fresh(name, sort_of(old)))
    return out


# ---------------------------------------------------------------------------
# Initialization
# ---------------------------------------------------------------------------


def _proc_store(
    tu: TranslationUnit, proc: Procedure, counter: FreshCounter
) -> SymbolicStore:
    globals_scope = {g.name: counter.fresh(g.name, g.sort) for g in tu.globals}
    params_scope = {name: counter.fresh(name, sort) for name, sort in proc.params}
    return SymbolicStore(
        (Scope("globals", globals_scope), Scope("frame", params_scope))
    )


def _contract_rest(tu: TranslationUnit, proc: Procedure) -> tuple:
    assume = Assume(proc.requires, proc.requires_loc or proc.loc)
    check = Assert(
        proc.ensures, proc.ensures_loc or proc.loc, ObligationKind.POSTCONDITION
    )
    body = proc.body
    if proc.name == "main":
        inits = tuple(Assign(g.name, g.init, g.loc) for g in tu.globals)
        return inits + (assume,) + body + (check,)
    return (assume,) + body + (check,)


def initial_config(tu: TranslationUnit, counter: FreshCounter) -> Configuration:
    """One sequential branch per procedure, in declaration order, each set
    up to verify `assume P; body; assert Q`; main's body is prefixed by the
    global initializers."""
    children = []
    for proc in tu.procedures:
        store = _proc_store(tu, proc, counter)
        frames = (FrameInfo(proc.name, None, 1),)
        children.append(
            Sequential(store, PathCondition(), _contract_rest(tu, proc), frames)
        )
    return Parallel(tuple(children))


# ---------------------------------------------------------------------------
# Division guards
# ---------------------------------------------------------------------------


def _division_guards(
    exprs_with_eval: list[tuple[Expr, Callable[[str], Expr]]],
    path: PathCondition,
    loc: SourceLoc,
) -> list[Obligation]:
    """One divisionByZero obligation per div/mod occurrence in the given
    source expressions, each divisor evaluated through its environment."""
    guards: list[Obligation] = []
    seen: set[Expr] = set()

    def scan(x: Expr, lookup) -> None:
        if isinstance(x, Binary):
            scan(x.left, lookup)
            scan(x.right, lookup)
            if x.op in (BinOp.DIV, BinOp.MOD):
                divisor = substitute(lookup, x.right)
                if divisor in seen:
                    return
                seen.add(divisor)
                negated = mk_not(_mk_binary(BinOp.NE, divisor, IntLit(0)))
                guards.append(
                    Obligation(path, negated, ObligationKind.DIV_BY_ZERO, loc)
                )
        elif isinstance(x, Unary):
            scan(x.arg, lookup)

    for expr, lookup in exprs_with_eval:
        scan(expr, lookup)
    return guards


# ---------------------------------------------------------------------------
# The step relation
# ---------------------------------------------------------------------------


def _seq(store, path, rest, frames) -> Configuration:
    if not rest:
        return Done(store, path)
    return Sequential(store, path, tuple(rest), frames)


def _contract_env(
    store: SymbolicStore,
    callee: Procedure,
    actuals: list[Expr],
    result: Optional[Expr],
):
    """Lookup for contract formulas: parameters map to evaluated actuals,
    `result` to the havoc variable, anything else to the caller's globals
    (contracts cannot mention caller locals)."""
    params = {name: value for (name, _), value in zip(callee.params, actuals)}

    def lookup(name: str) -> Expr:
        if name in params:
            return params[name]
        if name == "result":
            if result is None:
                raise UnboundVariable("result")
            return result
        return store.lookup_global(name)

    return lookup


def step(
    tu: TranslationUnit,
    config: Configuration,
    schedule: Schedule,
    counter: FreshCounter,
    mode: CallMode = CallMode.CONTRACT,
) -> Configuration:
    """Perform one transition of the branch addressed by `schedule`."""
    leaf = resolve(config, schedule)
    if not isinstance(leaf, Sequential) or not leaf.rest:
        raise NotSteppable(f"configuration at {schedule} cannot step")
    successor = _step_leaf(tu, leaf, counter, mode)
    return replace_at(config, schedule, successor)


def _step_leaf(
    tu: TranslationUnit, leaf: Sequential, counter: FreshCounter, mode: CallMode
) -> Configuration:
    store, path, frames = leaf.store, leaf.path, leaf.frames
    stmt, rest = leaf.rest[0], leaf.rest[1:]

    if isinstance(stmt, Assume):
        cond = substitute(store, stmt.cond)
        succ = _seq(store, path.and_(cond), rest, frames)
        guards = _division_guards([(stmt.cond, store)], path, stmt.loc)
        return _with_guards(succ, guards)

    if isinstance(stmt, Assert):
        cond = substitute(store, stmt.cond)
        succ = _seq(store, path.and_(cond), rest, frames)
        obligation = Obligation(path, mk_not(cond), stmt.kind, stmt.loc)
        guards = _division_guards([(stmt.cond, store)], path, stmt.loc)
        return Parallel(tuple([succ, obligation] + guards))

    if isinstance(stmt, Assign):
        value = substitute(store, stmt.rhs)
        if stmt.target == "result" and not store.has("result"):
            new_store = store.bind_innermost("result", value)
        else:
            new_store = store.assign(stmt.target, value)
        succ = _seq(new_store, path, rest, frames)
        guards = _division_guards([(stmt.rhs, store)], path, stmt.loc)
        return _with_guards(succ, guards)

    if isinstance(stmt, LocalDecl):
        value = substitute(store, stmt.init)
        succ = _seq(store.bind_innermost(stmt.name, value), path, rest, frames)
        guards = _division_guards([(stmt.init, store)], path, stmt.loc)
        return _with_guards(succ, guards)

    if isinstance(stmt, If):
        cond = substitute(store, stmt.cond)
        then_branch = _seq(store, path.and_(cond), stmt.then_body + rest, frames)
        else_branch = _seq(
            store, path.and_(mk_not(cond)), stmt.else_body + rest, frames
        )
        guards = _division_guards([(stmt.cond, store)], path, stmt.loc)
        return Parallel(tuple([then_branch, else_branch] + guards))

    if isinstance(stmt, While):
        inv_now = substitute(store, stmt.invariant)
        init_check = Obligation(
            path, mk_not(inv_now), ObligationKind.INVARIANT_INIT, stmt.loc
        )
        touched = modified_vars(stmt.body) & store.bound_names()
        havocked = freshen(store, touched, counter)
        cond_h = substitute(havocked, stmt.cond)
        inv_h = substitute(havocked, stmt.invariant)
        preserve_rest = stmt.body + (
            Assert(stmt.invariant, stmt.loc, ObligationKind.INVARIANT_PRESERVE),
        )
        preserve = _seq(
            havocked, path.and_(cond_h).and_(inv_h), preserve_rest, frames
        )
        exit_branch = _seq(
            havocked, path.and_(mk_not(cond_h)).and_(inv_h), rest, frames
        )
        guards = _division_guards(
            [(stmt.invariant, store), (stmt.cond, havocked)], path, stmt.loc
        )
        return Parallel(tuple([init_check, preserve, exit_branch] + guards))

    if isinstance(stmt, Call):
        callee = tu.procedure(stmt.callee)
        actuals = [substitute(store, a) for a in stmt.args]
        if mode is CallMode.INLINE:
            return _inline_call(stmt, callee, store, path, rest, frames, actuals)
        return _contract_call(
            stmt, callee, store, path, rest, frames, actuals, counter
        )

    if isinstance(stmt, FrameReturn):
        frame = frames[-1]
        result_value = store.lookup("result") if stmt.target is not None else None
        popped = store.drop_from(frame.scope_index)
        if stmt.target is not None:
            if stmt.target == "result" and not popped.has("result"):
                popped = popped.bind_innermost("result", result_value)
            else:
                popped = popped.assign(stmt.target, result_value)
        return _seq(popped, path, rest, frames[:-1])

    raise TypeError(f"not a statement: {stmt!r}")


def _with_guards(succ: Configuration, guards: list[Obligation]) -> Configuration:
    if not guards:
        return succ
    return Parallel(tuple([succ] + guards))


def _contract_call(
    stmt: Call,
    callee: Procedure,
    store: SymbolicStore,
    path: PathCondition,
    rest: tuple,
    frames: tuple,
    actuals: list[Expr],
    counter: FreshCounter,
) -> Configuration:
    havoc: Optional[LogicVar] = None
    if callee.return_sort is not None:
        havoc = counter.fresh(stmt.result or callee.name, callee.return_sort)
    pre_env = _contract_env(store, callee, actuals, None)
    pre = substitute(pre_env, callee.requires)
    pre_check = Obligation(path, mk_not(pre), ObligationKind.PRECONDITION, stmt.loc)
    post_env = _contract_env(store, callee, actuals, havoc)
    post = substitute(post_env, callee.ensures)
    new_store = store
    if stmt.result is not None:
        assert havoc is not None
        if stmt.result == "result" and not store.has("result"):
            new_store = store.bind_innermost("result", havoc)
        else:
            new_store = store.assign(stmt.result, havoc)
    succ = _seq(new_store, path.and_(post), rest, frames)
    guards = _division_guards(
        [(arg, store) for arg in stmt.args]
        + [(callee.requires, pre_env), (callee.ensures, post_env)],
        path,
        stmt.loc,
    )
    return Parallel(tuple([pre_check, succ] + guards))


def _inline_call(
    stmt: Call,
    callee: Procedure,
    store: SymbolicStore,
    path: PathCondition,
    rest: tuple,
    frames: tuple,
    actuals: list[Expr],
) -> Configuration:
    bindings = {name: value for (name, _), value in zip(callee.params, actuals)}
    new_store = store.push_scope("frame", bindings)
    frame = FrameInfo(callee.name, stmt.loc, len(store.scopes))
    epilogue = (
        Assert(
            callee.ensures,
            callee.ensures_loc or callee.loc,
            ObligationKind.POSTCONDITION,
        ),
        FrameReturn(stmt.result, stmt.loc),
    )
    succ = Sequential(
        new_store, path, callee.body + epilogue + rest, frames + (frame,)
    )
    guards = _division_guards([(arg, store) for arg in stmt.args], path, stmt.loc)
    return _with_guards(succ, guards)


# ---------------------------------------------------------------------------
# Eager pruning
# ---------------------------------------------------------------------------


def prune(config: Configuration, solver: Solver) -> tuple[Configuration, PruneMap]:
    """Drop branches with unsatisfiable path conditions and decide open
    obligations: discharged ones disappear, refuted ones keep a
    countermodel, undecidable ones stay marked unknown. Solver failures
    only ever yield `unknown`, never an error.

    Surviving children keep their relative order; the returned map records
    old-to-new indices for thread-identity bookkeeping. Only the root
    parallel node may end up empty (meaning: fully verified).
    """
    pruned, prune_map = _prune_node(config, solver)
    if pruned is None:
        assert isinstance(config, Parallel)
        return Parallel(()), prune_map
    return pruned, prune_map


def _prune_node(
    node: Configuration, solver: Solver
) -> tuple[Optional[Configuration], PruneMap]:
    pm = PruneMap()
    if isinstance(node, Parallel):
        survivors = []
        for i, child in enumerate(node.children):
            new_child, child_pm = _prune_node(child, solver)
            if new_child is None:
                pm.removed[i] = child
            else:
                pm.index_map[i] = len(survivors)
                if isinstance(new_child, Parallel):
                    pm.children[i] = child_pm
                survivors.append(new_child)
        if not survivors:
            return None, pm
        return Parallel(tuple(survivors)), pm
    if isinstance(node, (Sequential, Done)):
        result = solver.check_sat(node.path.as_expr())
        if result.verdict is Verdict.UNSAT:
            return None, pm
        return node, pm
    if isinstance(node, Obligation):
        if node.status != OPEN:
            return node, pm  # decided eagerly at creation; sticky
        result = solver.check_sat(node.query())
        if result.verdict is Verdict.UNSAT:
            return None, pm  # discharged
        if result.verdict is Verdict.SAT:
            return replace(node, status=FAILED, model=result.model), pm
        return replace(node, status=UNDECIDED), pm
    raise TypeError(f"not a configuration: {node!r}")


# ---------------------------------------------------------------------------
# Continue
# ---------------------------------------------------------------------------


class StopReason(Enum):
    BREAKPOINT = "breakpoint"
    ENDED = "ended"
    SPLIT = "split"
    OBLIGATION = "obligation"
    FUEL_EXHAUSTED = "fuelExhausted"


@dataclass
class RunResult:
    config: Configuration
    reason: StopReason
    schedules: list[Schedule]  # steppable descendants of the run thread
    remap: Callable[[Schedule], Optional[Schedule]]  # whole-run translation
    steps: int = 0


def _compose(first, second):
    def remap(schedule):
        out = first(schedule)
        return None if out is None else second(out)

    return remap


def run_to_break(
    tu: TranslationUnit,
    config: Configuration,
    schedule: Schedule,
    breakpoints: set[tuple[str, int]],
    solver: Solver,
    counter: FreshCounter,
    fuel: int = 10_000,
) -> RunResult:
    """Step the addressed thread (contract mode, pruning eagerly) until it
    reaches a breakpoint, finishes, splits into several steppable branches,
    or raises an undischarged obligation."""
    remap = lambda s: s  # noqa: E731
    steps = 0
    current = schedule
    while True:
        if steps >= fuel:
            return RunResult(config, StopReason.FUEL_EXHAUSTED, [current], remap, steps)
        config = step(tu, config, current, counter)
        steps += 1
        config, pm = prune(config, solver)
        remap = _compose(remap, pm.remap)
        position = pm.remap(current)
        descendants = (
            []
            if position is None
            else [s for s in schedules(config) if s[: len(position)] == position]
        )
        if position is not None:
            subtree = resolve_subtree(config, position)
            bad = [
                leaf
                for _, leaf in leaves(subtree)
                if isinstance(leaf, Obligation) and leaf.status in (FAILED, UNDECIDED)
            ]
            if bad:
                return RunResult(
                    config, StopReason.OBLIGATION, descendants, remap, steps
                )
        if not descendants:
            return RunResult(config, StopReason.ENDED, [], remap, steps)
        if len(descendants) > 1:
            return RunResult(config, StopReason.SPLIT, descendants, remap, steps)
        current = descendants[0]
        leaf = resolve(config, current)
        assert isinstance(leaf, Sequential)
        loc = loc_of(leaf.rest)
        if loc is not None and (loc.file, loc.line) in breakpoints:
            return RunResult(config, StopReason.BREAKPOINT, [current], remap, steps)


def resolve_subtree(config: Configuration, position: Schedule) -> Configuration:
    node = config
    for index in position:
        if not isinstance(node, Parallel) or not 0 <= index < len(node.children):
            raise InvalidSchedule(f"position {position} is gone")
        node = node.children[index]
    return node


# ---------------------------------------------------------------------------
# Batch exploration (the `verify` command and the soundness oracles)
# ---------------------------------------------------------------------------


@dataclass
class ObligationRecord:
    proc: str
    kind: ObligationKind
    at: SourceLoc
    status: str  # "discharged" | "failed" | "unknown"
    model: Optional[dict] = None


@dataclass
class ExploreResult:
    config: Configuration
    records: list[ObligationRecord]
    removed: list[Configuration]  # pruned subtrees (for soundness checks)
    steps: int
    fuel_exhausted: bool


def explore(
    tu: TranslationUnit,
    solver: Solver,
    counter: Optional[FreshCounter] = None,
    fuel: int = 100_000,
) -> ExploreResult:
    """Run every branch to completion, leftmost-first, pruning eagerly, and
    record the fate of every obligation along the way."""
    counter = counter or FreshCounter()
    config = initial_config(tu, counter)
    proc_of: list[str] = [p.name for p in tu.procedures]
    records: list[ObligationRecord] = []
    removed: list[Configuration] = []
    config, pm = prune(config, solver)
    _collect_removed(pm, removed)
    proc_of = _remap_procs(pm, proc_of)
    steps = 0
    while True:
        pending = schedules(config)
        if not pending:
            return ExploreResult(config, records, removed, steps, False)
        if steps >= fuel:
            return ExploreResult(config, records, removed, steps, True)
        schedule = pending[0]
        proc = proc_of[schedule[0]]
        before = {pos for pos, leaf in leaves(config) if isinstance(leaf, Obligation)}
        config = step(tu, config, schedule, counter)
        steps += 1
        created = [
            (pos, leaf)
            for pos, leaf in leaves(config)
            if isinstance(leaf, Obligation) and pos not in before
        ]
        config, pm = prune(config, solver)
        for pos, obligation in created:
            final = pm.remap(pos)
            if final is None:
                records.append(
                    ObligationRecord(proc, obligation.kind, obligation.at, "discharged")
                )
            else:
                decided = resolve(config, final)
                assert isinstance(decided, Obligation)
                records.append(
                    ObligationRecord(
                        proc, decided.kind, decided.at, decided.status, decided.model
                    )
                )
        _collect_removed(pm, removed)
        proc_of = _remap_procs(pm, proc_of)


def _collect_removed(pm: PruneMap, removed: list[Configuration]) -> None:
    """Every leaf dropped by a prune, for the soundness oracle: pruned
    branches must have unsatisfiable paths, discharged obligations an
    unsatisfiable path-and-negation."""
    for node in pm.removed_nodes():
        removed.extend(leaf for _, leaf in leaves(node))


def _remap_procs(pm: PruneMap, proc_of: list[str]) -> list[str]:
    out: list[Optional[str]] = [None] * len(pm.index_map)
    for old, new in pm.index_map.items():
        out[new] = proc_of[old]
    return [name for name in out if name is not None]
