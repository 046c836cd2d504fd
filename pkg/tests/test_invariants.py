"""Cross-cutting engine/session invariants: store purity after every step,
schedule/thread faithfulness, inline recursion, and session determinism."""

from pathlib import Path

import pytest

from verdap.lang import logic_vars, parse_program, ProgVar, Sort, sort_of
from verdap.lang.ast import Binary, Unary
from verdap.sem import (
    CallMode,
    Done,
    FreshCounter,
    initial_config,
    leaves,
    Obligation,
    prune,
    schedules,
    Sequential,
    step,
)
from verdap.solve import BruteForce, Solver, SolverConfig

DATA = Path(__file__).parent / "data"


def has_prog_var(e) -> bool:
    if isinstance(e, ProgVar):
        return True
    if isinstance(e, Unary):
        return has_prog_var(e.arg)
    if isinstance(e, Binary):
        return has_prog_var(e.left) or has_prog_var(e.right)
    return False


def sweep(config, counter):
    """Assert store purity and counter bounds over every leaf."""
    for _, leaf in leaves(config):
        exprs = []
        if isinstance(leaf, (Sequential, Done)):
            for scope in leaf.store.scopes:
                exprs.extend(scope.bindings.values())
            exprs.extend(leaf.path.conjuncts)
            for conjunct in leaf.path.conjuncts:
                assert sort_of(conjunct) is Sort.BOOL
        elif isinstance(leaf, Obligation):
            exprs.extend(leaf.path.conjuncts)
            exprs.append(leaf.negated)
            assert sort_of(leaf.negated) is Sort.BOOL
        for e in exprs:
            assert not has_prog_var(e)
            assert all(v.index < counter.value for v in logic_vars(e))


@pytest.mark.parametrize(
    "name", ["abs.mv", "abs_bad.mv", "quot.mv", "count.mv", "calls.mv"]
)
def test_store_purity_through_full_exploration(name):
    source = (DATA / name).read_text()
    tu = parse_program(source, name)
    counter = FreshCounter()
    solver = Solver(SolverConfig(BruteForce(4)))
    config, _ = prune(initial_config(tu, counter), solver)
    sweep(config, counter)
    fuel = 200
    while fuel:
        pending = schedules(config)
        if not pending:
            break
        config = step(tu, config, pending[0], counter)
        sweep(config, counter)
        config, _ = prune(config, solver)
        sweep(config, counter)
        fuel -= 1
    assert fuel > 0


def test_inline_recursion_nests_frames_until_fuel():
    source = (
        "proc down(n: int): int ensures result == 0; {\n"
        "    result = 0;\n"
        "    if (n > 0) { result = down(n - 1); }\n"
        "}\n"
    )
    tu = parse_program(source, "rec.mv")
    counter = FreshCounter()
    solver = Solver(SolverConfig(BruteForce(2)))
    config, _ = prune(initial_config(tu, counter), solver)
    depth_seen = 1
    for _ in range(40):
        pending = schedules(config)
        if not pending:
            break
        # always step the leftmost branch, inlining every call
        config = step(tu, config, pending[0], counter, CallMode.INLINE)
        config, _ = prune(config, solver)
        for _, leaf in leaves(config):
            if isinstance(leaf, Sequential):
                depth_seen = max(depth_seen, len(leaf.frames))
    assert depth_seen >= 3  # recursion kept inlining new frames


def test_session_transcripts_deterministic_with_bruteforce():
    from verdap.dap.session import DebugSession

    program = str(DATA / "abs.mv")
    requests = [
        ("initialize", {"adapterID": "det"}),
        ("setBreakpoints", {"source": {"path": program}, "breakpoints": [{"line": 6}]}),
        ("launch", {"program": program, "bruteforceBound": 8}),
        ("threads", None),
        ("next", {"threadId": 1}),
        ("next", {"threadId": 1}),
        ("threads", None),
        ("continue", {"threadId": 3}),
        ("stackTrace", {"threadId": 3}),
        ("scopes", {"frameId": 3000}),
        ("variables", {"variablesReference": 30001}),
        ("evaluate", {"expression": "y", "frameId": 3000}),
        ("stepBack", {"threadId": 3}),
        ("threads", None),
        ("disconnect", None),
    ]

    def run():
        session = DebugSession(env={})
        transcript = []
        for i, (command, arguments) in enumerate(requests, start=1):
            message = {"type": "request", "seq": i, "command": command}
            if arguments is not None:
                message["arguments"] = arguments
            transcript.extend(session.handle(message))
        return transcript

    assert run() == run()


def test_configuration_done_acknowledged():
    from verdap.dap.session import DebugSession

    session = DebugSession(env={})
    [response] = session.handle(
        {"type": "request", "seq": 1, "command": "configurationDone"}
    )
    assert response["success"] is True
