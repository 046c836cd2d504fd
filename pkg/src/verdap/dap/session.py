"""Debug session: maps DAP requests onto the symbolic engine.

Branches of the execution tree appear as threads named by their schedule
digit string ("0", "00", "01", ...); failed or undecided proof obligations
appear as extra non-steppable threads suffixed with a marker. Every
mutating request pushes the full prior state (configuration, thread
registry, fresh counter) onto a history stack so stepBack can restore it
exactly. The request loop is strictly single-threaded.
"""

from __future__ import annotations

import os
import shlex
from dataclasses import dataclass
from typing import Callable, Optional

from ..lang.ast import (
    Binary,
    BinOp,
    BoolLit,
    Expr,
    IntLit,
    loc_of,
    logic_vars,
    pretty,
    Sort,
    sort_of,
    SourceLoc,
    statement_lines,
    TranslationUnit,
)
from ..lang.check import check_expression
from ..lang.parser import parse_expression, parse_program, ParseError
from ..sem.config import (
    Configuration,
    digit_string,
    FAILED,
    FreshCounter,
    leaves,
    Obligation,
    PathCondition,
    resolve,
    Schedule,
    Sequential,
    UNDECIDED,
)
from ..sem.engine import (
    CallMode,
    initial_config,
    prune,
    run_to_break,
    step,
    StopReason,
    substitute,
)
from ..solve import (
    BruteForce,
    DEFAULT_SOLVER_COMMAND,
    Entailment,
    eval_expr,
    External,
    Solver,
    SolverConfig,
    Verdict,
)

FAILED_MARK = "✗"  # ✗
UNDECIDED_MARK = "?"

CAPABILITIES = {
    "supportsConfigurationDoneRequest": True,
    "supportsStepBack": True,
    "supportsEvaluateForHovers": True,
    "supportsFunctionBreakpoints": False,
    "supportsConditionalBreakpoints": False,
    "supportsRestartRequest": False,
    "exceptionBreakpointFilters": [],
}


@dataclass(frozen=True)
class ThreadEntry:
    thread_id: int
    position: Schedule
    kind: str  # "branch" | "obligation"


@dataclass
class _Snapshot:
    config: Configuration
    registry: dict[int, ThreadEntry]
    next_thread_id: int
    counter_value: int


class DebugSession:
    def __init__(self, env: Optional[dict[str, str]] = None):
        self.env = dict(os.environ if env is None else env)
        self.seq = 0
        self.initialized = False
        self.launched = False
        self.closed = False
        self.terminated_sent = False
        self.unit: Optional[TranslationUnit] = None
        self.program_path: Optional[str] = None
        self.current: Optional[Configuration] = None
        self.counter = FreshCounter()
        self.solver = Solver(SolverConfig(External(DEFAULT_SOLVER_COMMAND)))
        self.fuel = 10_000
        self.breakpoints: dict[str, set[int]] = {}
        self._verified_lines: dict[str, Optional[frozenset[int]]] = {}
        self.registry: dict[int, ThreadEntry] = {}
        self.next_thread_id = 1
        self.history: list[_Snapshot] = []

    # -- message plumbing ---------------------------------------------------

    def _response(self, request: dict, body: Optional[dict] = None) -> dict:
        message = {
            "type": "response",
            "request_seq": request.get("seq", 0),
            "command": request.get("command", ""),
            "success": True,
        }
        if body is not None:
            message["body"] = body
        return message

    def _error(self, request: dict, text: str) -> dict:
        return {
            "type": "response",
            "request_seq": request.get("seq", 0),
            "command": request.get("command", ""),
            "success": False,
            "message": text,
        }

    def _event(self, name: str, body: Optional[dict] = None) -> dict:
        message: dict = {"type": "event", "event": name}
        if body is not None:
            message["body"] = body
        return message

    # -- dispatch -------------------------------------------------------------

    def handle(self, request: dict) -> list[dict]:
        """Process one request; returns the response plus any events in
        emission order. Sequence numbers are assigned here, last, so they
        strictly increase in that order."""
        command = request.get("command", "")
        handler = getattr(self, "_cmd_" + command, None)
        if handler is None:
            messages = [self._error(request, f"unsupported request '{command}'")]
        else:
            try:
                messages = handler(request)
            except ParseError as exc:
                messages = [self._error(request, str(exc))]
        for message in messages:
            self.seq += 1
            message["seq"] = self.seq
        return messages

    # -- lifecycle ------------------------------------------------------------

    def _cmd_initialize(self, request: dict) -> list[dict]:
        self.initialized = True
        return [self._response(request, dict(CAPABILITIES))]

    def _cmd_configurationDone(self, request: dict) -> list[dict]:
        return [self._response(request)]

    def _cmd_disconnect(self, request: dict) -> list[dict]:
        self.closed = True
        return [self._response(request)]

    def _solver_config(self, args: dict) -> SolverConfig:
        timeout = int(args.get("timeoutMs", 2000))
        solver = args.get("solver")
        if solver:
            return SolverConfig(External(tuple(shlex.split(solver))), timeout)
        if args.get("bruteforceBound"):
            return SolverConfig(BruteForce(int(args["bruteforceBound"])), timeout)
        env_solver = self.env.get("VERDAP_SOLVER")
        if env_solver:
            return SolverConfig(External(tuple(shlex.split(env_solver))), timeout)
        return SolverConfig(External(DEFAULT_SOLVER_COMMAND), timeout)

    def _cmd_launch(self, request: dict) -> list[dict]:
        if not self.initialized:
            return [self._error(request, "launch before initialize")]
        args = request.get("arguments", {})
        program = args.get("program")
        if not program:
            return [self._error(request, "launch needs a 'program' path")]
        try:
            with open(program, "r", encoding="utf-8") as handle:
                source = handle.read()
        except OSError as exc:
            return [self._error(request, f"cannot read {program}: {exc}")]
        try:
            self.unit = parse_program(source, program)
        except ParseError as exc:
            return [self._error(request, str(exc))]
        self.program_path = program
        self._verified_lines[_canon(program)] = statement_lines(self.unit)
        self.solver = Solver(self._solver_config(args))
        self.counter = FreshCounter()
        config = initial_config(self.unit, self.counter)
        self.current, _ = prune(config, self.solver)
        self.launched = True
        out = [self._response(request), self._event("initialized")]
        started, stopped, output = self._seed_registry()
        out.extend(started)
        out.extend(output)
        for event in stopped:
            event["body"]["reason"] = "entry"
        out.extend(stopped)
        out.extend(self._maybe_terminate())
        return out

    # -- breakpoints ------------------------------------------------------------

    def _cmd_setBreakpoints(self, request: dict) -> list[dict]:
        args = request.get("arguments", {})
        source = args.get("source", {})
        path = source.get("path", "")
        lines = [bp.get("line") for bp in args.get("breakpoints", [])]
        if not lines and "lines" in args:
            lines = list(args["lines"])
        lines = [int(line) for line in lines if line is not None]
        self.breakpoints[_canon(path)] = set(lines)
        known = self._statement_lines_for(path)
        body = {
            "breakpoints": [
                {"verified": known is not None and line in known, "line": line}
                for line in lines
            ]
        }
        return [self._response(request, body)]

    def _statement_lines_for(self, path: str) -> Optional[frozenset[int]]:
        key = _canon(path)
        if key not in self._verified_lines:
            try:
                with open(path, "r", encoding="utf-8") as handle:
                    unit = parse_program(handle.read(), path)
                self._verified_lines[key] = statement_lines(unit)
            except (OSError, ParseError):
                self._verified_lines[key] = None
        return self._verified_lines[key]

    def _breakpoint_set(self) -> set[tuple[str, int]]:
        if self.program_path is None:
            return set()
        lines = self.breakpoints.get(_canon(self.program_path), set())
        return {(self.program_path, line) for line in lines}

    # -- thread registry ----------------------------------------------------------

    def _listable(self) -> list[tuple[Schedule, str]]:
        assert self.current is not None
        out: list[tuple[Schedule, str]] = []
        for position, leaf in leaves(self.current):
            if isinstance(leaf, Sequential) and leaf.rest:
                out.append((position, "branch"))
            elif isinstance(leaf, Obligation) and leaf.status in (FAILED, UNDECIDED):
                out.append((position, "obligation"))
        return out

    def _thread_name(self, entry: ThreadEntry) -> str:
        name = digit_string(entry.position)
        if entry.kind == "obligation":
            leaf = resolve(self.current, entry.position)
            assert isinstance(leaf, Obligation)
            name += FAILED_MARK if leaf.status == FAILED else UNDECIDED_MARK
        return name

    def _seed_registry(self) -> tuple[list[dict], list[dict], list[dict]]:
        """Register every listable position afresh; returns (thread-started
        events, stopped events for branches, output events for failures)."""
        return self._reconcile(lambda position: None)

    def _reconcile(
        self,
        remap: Callable[[Schedule], Optional[Schedule]],
        stop_reasons: Optional[dict[Schedule, str]] = None,
    ) -> tuple[list[dict], list[dict], list[dict]]:
        """Rebuild the registry after a mutation. Surviving positions keep
        their ids (translated through `remap`); vanished ones exit, new
        ones start; ids are never reused."""
        listable = dict(self._listable())
        survivors: dict[int, ThreadEntry] = {}
        claimed: set[Schedule] = set()
        exited: list[dict] = []
        for thread_id in sorted(self.registry):
            entry = self.registry[thread_id]
            new_position = remap(entry.position)
            if (
                new_position is not None
                and listable.get(new_position) == entry.kind
                and new_position not in claimed
            ):
                survivors[thread_id] = ThreadEntry(thread_id, new_position, entry.kind)
                claimed.add(new_position)
            else:
                exited.append(
                    self._event("thread", {"reason": "exited", "threadId": thread_id})
                )
        started: list[dict] = []
        output: list[dict] = []
        for position, kind in sorted(listable.items()):
            if position in claimed:
                continue
            entry = ThreadEntry(self.next_thread_id, position, kind)
            self.next_thread_id += 1
            survivors[entry.thread_id] = entry
            started.append(
                self._event("thread", {"reason": "started", "threadId": entry.thread_id})
            )
            if kind == "obligation":
                leaf = resolve(self.current, position)
                assert isinstance(leaf, Obligation)
                if leaf.status == FAILED:
                    output.append(self._failure_output(leaf))
        self.registry = survivors
        stopped = [
            self._event(
                "stopped",
                {
                    "reason": (stop_reasons or {}).get(entry.position, "step"),
                    "threadId": entry.thread_id,
                },
            )
            for entry in sorted(self.registry.values(), key=lambda e: e.position)
            if entry.kind == "branch"
        ]
        return started, stopped, exited + output

    def _failure_output(self, leaf: Obligation) -> dict:
        text = (
            f"verification failure: {leaf.kind} at {leaf.at} "
            f"({_render_countermodel(leaf.model)})\n"
        )
        return self._event("output", {"category": "stderr", "output": text})

    def _maybe_terminate(self) -> list[dict]:
        if self.terminated_sent or not self.launched or self._listable():
            return []
        self.terminated_sent = True
        return [self._event("exited", {"exitCode": 0}), self._event("terminated")]

    def _entry_for(self, thread_id) -> ThreadEntry:
        entry = self.registry.get(thread_id)
        if entry is None:
            raise _RequestFailure(f"unknown thread {thread_id}")
        return entry

    # -- inspection ----------------------------------------------------------------

    def _cmd_threads(self, request: dict) -> list[dict]:
        threads = [
            {"id": entry.thread_id, "name": self._thread_name(entry)}
            for entry in sorted(self.registry.values(), key=lambda e: e.position)
        ]
        return [self._response(request, {"threads": threads})]

    def _cmd_stackTrace(self, request: dict) -> list[dict]:
        args = request.get("arguments", {})
        try:
            entry = self._entry_for(args.get("threadId"))
        except _RequestFailure as exc:
            return [self._error(request, str(exc))]
        leaf = resolve(self.current, entry.position)
        frames: list[dict] = []
        if isinstance(leaf, Sequential):
            stack = list(reversed(leaf.frames))  # innermost first
            loc = loc_of(leaf.rest)
            for display_index, frame in enumerate(stack):
                frames.append(
                    _frame_json(
                        entry.thread_id,
                        display_index,
                        frame.proc_name,
                        loc if loc is not None else SourceLoc(self.program_path or "", 1, 1),
                    )
                )
                loc = frame.call_site  # the caller's current line
        elif isinstance(leaf, Obligation):
            frames.append(
                _frame_json(entry.thread_id, 0, f"{leaf.kind} check", leaf.at)
            )
        return [
            self._response(
                request, {"stackFrames": frames, "totalFrames": len(frames)}
            )
        ]

    def _cmd_scopes(self, request: dict) -> list[dict]:
        args = request.get("arguments", {})
        frame_id = int(args.get("frameId", -1))
        thread_id, display_index = divmod(frame_id, 1000)
        try:
            entry = self._entry_for(thread_id)
        except _RequestFailure as exc:
            return [self._error(request, str(exc))]
        leaf = resolve(self.current, entry.position)
        scopes = []
        if isinstance(leaf, Sequential):
            scopes.append(
                {"name": "Vars", "variablesReference": frame_id * 10 + 1, "expensive": False}
            )
        if display_index == 0:
            scopes.append(
                {"name": "State", "variablesReference": frame_id * 10 + 2, "expensive": False}
            )
        return [self._response(request, {"scopes": scopes})]

    def _cmd_variables(self, request: dict) -> list[dict]:
        args = request.get("arguments", {})
        reference = int(args.get("variablesReference", -1))
        frame_id, which = divmod(reference, 10)
        thread_id, display_index = divmod(frame_id, 1000)
        try:
            entry = self._entry_for(thread_id)
        except _RequestFailure as exc:
            return [self._error(request, str(exc))]
        leaf = resolve(self.current, entry.position)
        pairs: list[tuple[str, str]] = []
        if which == 1 and isinstance(leaf, Sequential):
            pairs = self._vars_pairs(leaf, display_index)
        elif which == 2:
            pairs = self._state_pairs(leaf)
        body = {
            "variables": [
                {"name": name, "value": value, "variablesReference": 0}
                for name, value in pairs
            ]
        }
        return [self._response(request, body)]

    def _vars_pairs(self, leaf: Sequential, display_index: int) -> list[tuple[str, str]]:
        stack = list(reversed(leaf.frames))
        if not 0 <= display_index < len(stack):
            return []
        frame = stack[display_index]
        frame_scope = leaf.store.scopes[frame.scope_index]
        pairs = [(name, pretty(value)) for name, value in frame_scope.bindings.items()]
        globals_scope = leaf.store.scopes[0]
        pairs.extend(
            (name, pretty(value))
            for name, value in globals_scope.bindings.items()
            if name not in frame_scope.bindings
        )
        return pairs

    def _state_pairs(self, leaf) -> list[tuple[str, str]]:
        total = sum(
            1 for _, node in leaves(self.current) if isinstance(node, Obligation)
        )
        if isinstance(leaf, Sequential):
            return [("path", leaf.path.render()), ("obligations", str(total))]
        assert isinstance(leaf, Obligation)
        pairs = [
            ("path", leaf.path.render()),
            ("negated", pretty(leaf.negated)),
            ("status", leaf.status),
        ]
        if leaf.status == FAILED:
            pairs.append(("countermodel", _render_countermodel(leaf.model)))
        pairs.append(("obligations", str(total)))
        return pairs

    # -- evaluate ---------------------------------------------------------------

    def _cmd_evaluate(self, request: dict) -> list[dict]:
        args = request.get("arguments", {})
        frame_id = args.get("frameId")
        thread_id = frame_id // 1000 if frame_id is not None else args.get("threadId")
        try:
            entry = self._entry_for(thread_id)
        except _RequestFailure as exc:
            return [self._error(request, str(exc))]
        leaf = resolve(self.current, entry.position)
        if not isinstance(leaf, Sequential):
            return [self._error(request, "thread is not at a steppable branch")]
        try:
            expr = parse_expression(args.get("expression", ""))
            env = {
                name: sort_of(leaf.store.lookup(name))
                for name in leaf.store.bound_names()
            }
            sort = check_expression(expr, env)
        except ParseError as exc:
            return [self._error(request, str(exc))]
        value = substitute(leaf.store, expr)
        text = pretty(value) + self._verdict_suffix(leaf.path, value, sort)
        return [
            self._response(request, {"result": text, "variablesReference": 0})
        ]

    def _verdict_suffix(self, path: PathCondition, value: Expr, sort: Sort) -> str:
        if isinstance(value, (IntLit, BoolLit)):
            return ""
        if sort is Sort.BOOL:
            outcome = self.solver.entails(path.as_expr(), value)
            if outcome.verdict is Entailment.VALID:
                return " [valid under path]"
            if outcome.verdict is Entailment.INVALID:
                if outcome.model:
                    return f" [invalid: {_render_countermodel(outcome.model)}]"
                return " [invalid]"
            return " [unknown]"
        witness = self.solver.check_sat(
            Binary(BinOp.AND, path.as_expr(), Binary(BinOp.EQ, value, value))
        )
        if witness.verdict is Verdict.SAT and witness.model is not None:
            try:
                concrete = eval_expr(value, witness.model)
            except Exception:
                return " [unknown]"
            relevant = {
                var: val
                for var, val in witness.model.items()
                if var in logic_vars(value)
            }
            if relevant:
                return f" [= {concrete} for {_render_countermodel(relevant)}]"
            return f" [= {concrete}]"
        return " [unknown]"

    # -- stepping ------------------------------------------------------------------

    def _cmd_next(self, request: dict) -> list[dict]:
        return self._do_step(request, CallMode.CONTRACT)

    def _cmd_stepIn(self, request: dict) -> list[dict]:
        return self._do_step(request, CallMode.INLINE)

    def _do_step(self, request: dict, mode: CallMode) -> list[dict]:
        args = request.get("arguments", {})
        try:
            entry = self._entry_for(args.get("threadId"))
        except _RequestFailure as exc:
            return [self._error(request, str(exc))]
        if entry.kind != "branch":
            return [self._error(request, f"thread {entry.thread_id} cannot step")]
        self._push_history()
        assert self.unit is not None
        try:
            config = step(self.unit, self.current, entry.position, self.counter, mode)
        except Exception as exc:
            self.history.pop()
            return [self._error(request, f"step failed: {exc}")]
        self.current, prune_map = prune(config, self.solver)
        out = [self._response(request)]
        out.extend(self._emit_after_mutation(prune_map.remap, {}))
        return out

    def _cmd_continue(self, request: dict) -> list[dict]:
        args = request.get("arguments", {})
        try:
            entry = self._entry_for(args.get("threadId"))
        except _RequestFailure as exc:
            return [self._error(request, str(exc))]
        if entry.kind != "branch":
            return [self._error(request, f"thread {entry.thread_id} cannot run")]
        self._push_history()
        assert self.unit is not None
        result = run_to_break(
            self.unit,
            self.current,
            entry.position,
            self._breakpoint_set(),
            self.solver,
            self.counter,
            self.fuel,
        )
        self.current = result.config
        reasons = {}
        if result.reason is StopReason.BREAKPOINT:
            reasons = {position: "breakpoint" for position in result.schedules}
        out = [self._response(request, {"allThreadsContinued": False})]
        out.extend(self._emit_after_mutation(result.remap, reasons))
        return out

    def _cmd_stepBack(self, request: dict) -> list[dict]:
        if not self.history:
            return [self._error(request, "nothing to undo")]
        snapshot = self.history.pop()
        previous = dict(self.registry)
        self.current = snapshot.config
        self.registry = dict(snapshot.registry)
        self.next_thread_id = snapshot.next_thread_id
        self.counter.restore(snapshot.counter_value)
        out = [self._response(request)]
        for thread_id in sorted(set(previous) - set(self.registry)):
            out.append(
                self._event("thread", {"reason": "exited", "threadId": thread_id})
            )
        for thread_id in sorted(set(self.registry) - set(previous)):
            out.append(
                self._event("thread", {"reason": "started", "threadId": thread_id})
            )
        for entry in sorted(self.registry.values(), key=lambda e: e.position):
            if entry.kind == "branch":
                out.append(
                    self._event(
                        "stopped", {"reason": "step", "threadId": entry.thread_id}
                    )
                )
        return out

    def _push_history(self) -> None:
        self.history.append(
            _Snapshot(
                self.current, dict(self.registry), self.next_thread_id, self.counter.value
            )
        )

    def _emit_after_mutation(
        self,
        remap: Callable[[Schedule], Optional[Schedule]],
        stop_reasons: dict[Schedule, str],
    ) -> list[dict]:
        started, stopped, other = self._reconcile(remap, stop_reasons)
        # exited events come first inside `other`, then failure output
        exited = [e for e in other if e.get("event") == "thread"]
        output = [e for e in other if e.get("event") == "output"]
        return exited + started + output + stopped + self._maybe_terminate()


def _render_countermodel(model) -> str:
    if not model:
        return "any values"
    parts = []
    for var in sorted(model, key=lambda v: (v.name, v.index)):
        value = model[var]
        rendered = ("true" if value else "false") if isinstance(value, bool) else str(value)
        parts.append(f"{var.render()} = {rendered}")
    return ", ".join(parts)


def _frame_json(thread_id: int, display_index: int, name: str, loc: SourceLoc) -> dict:
    return {
        "id": thread_id * 1000 + display_index,
        "name": name,
        "source": {"name": os.path.basename(loc.file), "path": loc.file},
        "line": loc.line,
        "column": loc.column,
    }


def _canon(path: str) -> str:
    return os.path.normcase(os.path.abspath(path)) if path else path


class _RequestFailure(Exception):
    pass
