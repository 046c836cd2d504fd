"""MiniVer abstract syntax: expressions, statements, procedures, and the
static analyses the symbolic engine needs (modified variables, free
variables, first-statement locations).

All nodes are immutable; statement bodies are tuples so whole trees can be
shared between configurations without copying.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union


class Sort(Enum):
    INT = "int"
    BOOL = "bool"

    def __str__(self) -> str:
        return self.value


class UnOp(Enum):
    NEG = "-"
    NOT = "!"


class BinOp(Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    MOD = "%"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="
    NE = "!="
    AND = "&&"
    OR = "||"
    IMPLIES = "==>"


ARITH_OPS = frozenset({BinOp.ADD, BinOp.SUB, BinOp.MUL, BinOp.DIV, BinOp.MOD})
COMPARE_OPS = frozenset({BinOp.LT, BinOp.LE, BinOp.GT, BinOp.GE, BinOp.EQ, BinOp.NE})
LOGIC_OPS = frozenset({BinOp.AND, BinOp.OR, BinOp.IMPLIES})


@dataclass(frozen=True)
class SourceLoc:
    file: str
    line: int  # 1-based
    column: int  # 1-based

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class ProgVar:
    name: str


@dataclass(frozen=True)
class LogicVar:
    """A logical variable, unique per allocation from a fresh counter.

    The sort rides along so solver declarations and freshening never need a
    separate environment.
    """

    name: str
    index: int
    sort: Sort

    def render(self) -> str:
        return f"{self.name}{self.index}"

    def smt_symbol(self) -> str:
        # Injective: the index contains no underscore, so splitting at the
        # last one recovers (name, index).
        return f"{self.name}_{self.index}"


@dataclass(frozen=True)
class Unary:
    op: UnOp
    arg: Expr


@dataclass(frozen=True)
class Binary:
    op: BinOp
    left: Expr
    right: Expr


Expr = Union[IntLit, BoolLit, ProgVar, LogicVar, Unary, Binary]

TRUE = BoolLit(True)
FALSE = BoolLit(False)


class ObligationKind(Enum):
    ASSERT = "assert"
    PRECONDITION = "precondition"
    POSTCONDITION = "postcondition"
    INVARIANT_INIT = "invariant-init"
    INVARIANT_PRESERVE = "invariant-preserve"
    DIV_BY_ZERO = "division-by-zero"

    def __str__(self) -> str:
        return self.value


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    target: str
    rhs: Expr
    loc: SourceLoc


@dataclass(frozen=True)
class LocalDecl:
    name: str
    sort: Sort
    init: Expr
    loc: SourceLoc


@dataclass(frozen=True)
class Assume:
    cond: Expr
    loc: SourceLoc


@dataclass(frozen=True)
class Assert:
    cond: Expr
    loc: SourceLoc
    # Synthesized asserts (loop invariant preservation, postconditions)
    # carry the obligation kind they give rise to.
    kind: ObligationKind = ObligationKind.ASSERT


@dataclass(frozen=True)
class If:
    cond: Expr
    then_body: tuple["Stmt", ...]
    else_body: tuple["Stmt", ...]
    loc: SourceLoc


@dataclass(frozen=True)
class While:
    cond: Expr
    invariant: Expr
    body: tuple["Stmt", ...]
    loc: SourceLoc


@dataclass(frozen=True)
class Call:
    result: Optional[str]
    callee: str
    args: tuple[Expr, ...]
    loc: SourceLoc


Stmt = Union[Assign, LocalDecl, Assume, Assert, If, While, Call]


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlobalDecl:
    name: str
    sort: Sort
    init: Expr
    loc: SourceLoc


@dataclass(frozen=True)
class Procedure:
    name: str
    params: tuple[tuple[str, Sort], ...]
    return_sort: Optional[Sort]
    requires: Expr
    ensures: Expr
    body: tuple[Stmt, ...]
    loc: SourceLoc
    requires_loc: Optional[SourceLoc] = None
    ensures_loc: Optional[SourceLoc] = None


@dataclass(frozen=True)
class TranslationUnit:
    globals: tuple[GlobalDecl, ...] = ()
    procedures: tuple[Procedure, ...] = ()

    def procedure(self, name: str) -> Procedure:
        for proc in self.procedures:
            if proc.name == name:
                return proc
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Analyses
# ---------------------------------------------------------------------------


def loc_of(stmts) -> Optional[SourceLoc]:
    """Location of the first statement; None for the empty program."""
    if not stmts:
        return None
    return stmts[0].loc


def modified_vars(body) -> frozenset[str]:
    """Names written anywhere in `body` (assignments, declarations, call
    results), including nested bodies. Sound over-approximation."""
    out: set[str] = set()
    for stmt in body:
        if isinstance(stmt, Assign):
            out.add(stmt.target)
        elif isinstance(stmt, LocalDecl):
            out.add(stmt.name)
        elif isinstance(stmt, Call):
            if stmt.result is not None:
                out.add(stmt.result)
        elif isinstance(stmt, If):
            out |= modified_vars(stmt.then_body)
            out |= modified_vars(stmt.else_body)
        elif isinstance(stmt, While):
            out |= modified_vars(stmt.body)
    return frozenset(out)


def free_vars(e: Expr) -> frozenset[str]:
    """All program-variable and (rendered) logic-variable names in `e`."""
    out: set[str] = set()

    def walk(x: Expr) -> None:
        if isinstance(x, ProgVar):
            out.add(x.name)
        elif isinstance(x, LogicVar):
            out.add(x.render())
        elif isinstance(x, Unary):
            walk(x.arg)
        elif isinstance(x, Binary):
            walk(x.left)
            walk(x.right)

    walk(e)
    return frozenset(out)


def logic_vars(e: Expr) -> frozenset[LogicVar]:
    out: set[LogicVar] = set()

    def walk(x: Expr) -> None:
        if isinstance(x, LogicVar):
            out.add(x)
        elif isinstance(x, Unary):
            walk(x.arg)
        elif isinstance(x, Binary):
            walk(x.left)
            walk(x.right)

    walk(e)
    return frozenset(out)


def sort_of(e: Expr) -> Sort:
    """Sort of a program-variable-free expression."""
    if isinstance(e, IntLit):
        return Sort.INT
    if isinstance(e, BoolLit):
        return Sort.BOOL
    if isinstance(e, LogicVar):
        return e.sort
    if isinstance(e, Unary):
        return Sort.INT if e.op is UnOp.NEG else Sort.BOOL
    if isinstance(e, Binary):
        return Sort.INT if e.op in ARITH_OPS else Sort.BOOL
    raise ValueError(f"sort of {e!r} depends on a program-variable environment")


# ---------------------------------------------------------------------------
# Pretty printing (source syntax; parses back to the same tree)
# ---------------------------------------------------------------------------

_LEVEL = {
    BinOp.IMPLIES: 1,
    BinOp.OR: 2,
    BinOp.AND: 3,
    BinOp.EQ: 4,
    BinOp.NE: 4,
    BinOp.LT: 5,
    BinOp.LE: 5,
    BinOp.GT: 5,
    BinOp.GE: 5,
    BinOp.ADD: 6,
    BinOp.SUB: 6,
    BinOp.MUL: 7,
    BinOp.DIV: 7,
    BinOp.MOD: 7,
}
_UNARY_LEVEL = 8
_RIGHT_ASSOC = frozenset({BinOp.IMPLIES})


def pretty(e: Expr) -> str:
    return _pretty(e, 0)


def _pretty(e: Expr, min_level: int) -> str:
    if isinstance(e, IntLit):
        text = str(e.value)
        # A negative literal only arises from folding; print as a negation.
        return text if e.value >= 0 else f"-{-e.value}"
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, ProgVar):
        return e.name
    if isinstance(e, LogicVar):
        return e.render()
    if isinstance(e, Unary):
        inner = _pretty(e.arg, _UNARY_LEVEL)
        text = f"{e.op.value}{inner}"
        return text if min_level <= _UNARY_LEVEL else f"({text})"
    if isinstance(e, Binary):
        level = _LEVEL[e.op]
        if e.op in _RIGHT_ASSOC:
            left = _pretty(e.left, level + 1)
            right = _pretty(e.right, level)
        else:
            left = _pretty(e.left, level)
            right = _pretty(e.right, level + 1)
        text = f"{left} {e.op.value} {right}"
        return text if level >= min_level else f"({text})"
    raise TypeError(f"not an expression: {e!r}")


def _pretty_block(body, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    if not body:
        out.append(pad + "{ }")
        return
    out.append(pad + "{")
    for stmt in body:
        _pretty_stmt(stmt, indent + 1, out)
    out.append(pad + "}")


def _pretty_stmt(stmt, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    if isinstance(stmt, Assign):
        out.append(f"{pad}{stmt.target} = {pretty(stmt.rhs)};")
    elif isinstance(stmt, LocalDecl):
        out.append(f"{pad}var {stmt.name}: {stmt.sort} = {pretty(stmt.init)};")
    elif isinstance(stmt, Assume):
        out.append(f"{pad}assume {pretty(stmt.cond)};")
    elif isinstance(stmt, Assert):
        out.append(f"{pad}assert {pretty(stmt.cond)};")
    elif isinstance(stmt, If):
        out.append(f"{pad}if ({pretty(stmt.cond)})")
        _pretty_block(stmt.then_body, indent, out)
        if stmt.else_body:
            out.append(pad + "else")
            _pretty_block(stmt.else_body, indent, out)
    elif isinstance(stmt, While):
        out.append(f"{pad}while ({pretty(stmt.cond)})")
        out.append(f"{pad}    invariant {pretty(stmt.invariant)};")
        _pretty_block(stmt.body, indent, out)
    elif isinstance(stmt, Call):
        args = ", ".join(pretty(a) for a in stmt.args)
        prefix = f"{stmt.result} = " if stmt.result is not None else ""
        out.append(f"{pad}{prefix}{stmt.callee}({args});")
    else:
        raise TypeError(f"not a statement: {stmt!r}")


def pretty_unit(tu: TranslationUnit) -> str:
    """Render a translation unit back to MiniVer source."""
    out: list[str] = []
    for g in tu.globals:
        out.append(f"var {g.name}: {g.sort} = {pretty(g.init)};")
    if tu.globals and tu.procedures:
        out.append("")
    for i, proc in enumerate(tu.procedures):
        if i:
            out.append("")
        params = ", ".join(f"{n}: {s}" for n, s in proc.params)
        ret = f": {proc.return_sort}" if proc.return_sort is not None else ""
        out.append(f"proc {proc.name}({params}){ret}")
        if proc.requires != TRUE:
            out.append(f"    requires {pretty(proc.requires)};")
        if proc.ensures != TRUE:
            out.append(f"    ensures {pretty(proc.ensures)};")
        _pretty_block(proc.body, 0, out)
    return "\n".join(out) + ("\n" if out else "")


def statement_lines(tu: TranslationUnit) -> frozenset[int]:
    """Lines on which some statement starts (breakpoint-verifiable lines)."""
    lines: set[int] = set()

    def walk(body) -> None:
        for stmt in body:
            lines.add(stmt.loc.line)
            if isinstance(stmt, If):
                walk(stmt.then_body)
                walk(stmt.else_body)
            elif isinstance(stmt, While):
                walk(stmt.body)

    for proc in tu.procedures:
        walk(proc.body)
    return frozenset(lines)
