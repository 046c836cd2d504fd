"""Independent concrete-execution oracle for loop-free MiniVer programs.

Deliberately separate from the engine: a direct big-step interpreter over
integer environments, used to cross-check symbolic exploration by
exhaustive input enumeration and to confirm modified-variable sets by
store differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from verdap.lang.ast import (
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
    LocalDecl,
    Procedure,
    ProgVar,
    SourceLoc,
    TranslationUnit,
    Unary,
    UnOp,
    While,
)

Value = Union[int, bool]


@dataclass(frozen=True)
class Finished:
    env: dict[str, Value]


@dataclass(frozen=True)
class AssertFailed:
    loc: SourceLoc


@dataclass(frozen=True)
class DivByZero:
    loc: SourceLoc


@dataclass(frozen=True)
class Blocked:
    """An assume evaluated to false: this input never reaches further."""


Outcome = Union[Finished, AssertFailed, DivByZero, Blocked]


class _Stop(Exception):
    def __init__(self, outcome: Outcome):
        self.outcome = outcome


def _ediv(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError
    return a // b if b > 0 else -(a // -b)


def eval_concrete(e: Expr, env: dict[str, Value]) -> Value:
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, ProgVar):
        return env[e.name]
    if isinstance(e, Unary):
        v = eval_concrete(e.arg, env)
        return -v if e.op is UnOp.NEG else not v
    if isinstance(e, Binary):
        if e.op is BinOp.AND:
            return bool(eval_concrete(e.left, env)) and bool(eval_concrete(e.right, env))
        if e.op is BinOp.OR:
            return bool(eval_concrete(e.left, env)) or bool(eval_concrete(e.right, env))
        if e.op is BinOp.IMPLIES:
            return (not eval_concrete(e.left, env)) or bool(eval_concrete(e.right, env))
        a = eval_concrete(e.left, env)
        b = eval_concrete(e.right, env)
        return {
            BinOp.ADD: lambda: a + b,
            BinOp.SUB: lambda: a - b,
            BinOp.MUL: lambda: a * b,
            BinOp.DIV: lambda: _ediv(a, b),
            BinOp.MOD: lambda: a - b * _ediv(a, b),
            BinOp.LT: lambda: a < b,
            BinOp.LE: lambda: a <= b,
            BinOp.GT: lambda: a > b,
            BinOp.GE: lambda: a >= b,
            BinOp.EQ: lambda: a == b,
            BinOp.NE: lambda: a != b,
        }[e.op]()
    raise TypeError(f"not an expression: {e!r}")


def _run_body(body, env: dict[str, Value], unit: TranslationUnit) -> None:
    for stmt in body:
        _run_stmt(stmt, env, unit)


def _eval_or_stop(e: Expr, env, loc: SourceLoc) -> Value:
    try:
        return eval_concrete(e, env)
    except ZeroDivisionError:
        raise _Stop(DivByZero(loc)) from None


def _run_stmt(stmt, env: dict[str, Value], unit: TranslationUnit) -> None:
    if isinstance(stmt, (Assign, LocalDecl)):
        target = stmt.target if isinstance(stmt, Assign) else stmt.name
        source = stmt.rhs if isinstance(stmt, Assign) else stmt.init
        env[target] = _eval_or_stop(source, env, stmt.loc)
    elif isinstance(stmt, Assume):
        if not _eval_or_stop(stmt.cond, env, stmt.loc):
            raise _Stop(Blocked())
    elif isinstance(stmt, Assert):
        if not _eval_or_stop(stmt.cond, env, stmt.loc):
            raise _Stop(AssertFailed(stmt.loc))
    elif isinstance(stmt, If):
        branch = stmt.then_body if _eval_or_stop(stmt.cond, env, stmt.loc) else stmt.else_body
        _run_body(branch, env, unit)
    elif isinstance(stmt, Call):
        callee = unit.procedure(stmt.callee)
        args = [_eval_or_stop(a, env, stmt.loc) for a in stmt.args]
        inner: dict[str, Value] = {name: v for (name, _), v in zip(callee.params, args)}
        _run_body(callee.body, inner, unit)
        if stmt.result is not None:
            env[stmt.result] = inner["result"]
    elif isinstance(stmt, While):
        raise NotImplementedError("the concrete oracle covers loop-free programs")
    else:
        raise TypeError(f"not a statement: {stmt!r}")


def run_procedure(
    unit: TranslationUnit, proc: Procedure, inputs: dict[str, Value]
) -> Outcome:
    """Concrete big-step run of `proc` from the given parameter values."""
    env: dict[str, Value] = dict(inputs)
    try:
        _run_body(proc.body, env, unit)
    except _Stop as stop:
        return stop.outcome
    return Finished(env)
