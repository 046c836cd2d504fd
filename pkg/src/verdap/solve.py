"""Satisfiability and entailment of path conditions.

Two backends behind one interface:

  * external -- an SMT solver spoken to over SMT-LIB v2 text, one child
    process per query (write script, close stdin, read verdict + model);
  * bruteforce -- exhaustive enumeration of {-bound..bound} per integer
    variable. Decisive for `sat` (a witness is a witness) and for formulas
    without integer variables; otherwise a missing witness only yields
    `unknown`, since one may lie outside the bound.

`unknown` is always a safe verdict: pruning keeps the node, obligations stay
undecided, Evaluate reports it as such. Returned models are validated by
concrete evaluation before being handed out.
"""

from __future__ import annotations

import itertools
import subprocess
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .lang.ast import (
    Binary,
    BinOp,
    BoolLit,
    Expr,
    IntLit,
    logic_vars,
    LogicVar,
    ProgVar,
    Sort,
    Unary,
    UnOp,
)

Value = Union[int, bool]
Model = dict[LogicVar, Value]


class SolverUnavailable(Exception):
    """The external solver process could not be spawned."""


class MalformedModel(Exception):
    """The external solver's response could not be parsed."""


class EvalDivisionByZero(ArithmeticError):
    pass


class Verdict(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SatResult:
    verdict: Verdict
    model: Optional[Model] = None  # present iff verdict is SAT
    reason: Optional[str] = None  # why an UNKNOWN is unknown


@dataclass(frozen=True)
class External:
    command: tuple[str, ...]


@dataclass(frozen=True)
class BruteForce:
    bound: int = 8


@dataclass(frozen=True)
class SolverConfig:
    backend: Union[External, BruteForce]
    timeout_ms: int = 2000


DEFAULT_SOLVER_COMMAND = ("z3", "-in")


# ---------------------------------------------------------------------------
# Concrete evaluation (Euclidean div/mod, matching SMT-LIB Ints)
# ---------------------------------------------------------------------------


def euclidean_div(a: int, b: int) -> int:
    if b == 0:
        raise EvalDivisionByZero("division by zero")
    return a // b if b > 0 else -(a // -b)


def euclidean_mod(a: int, b: int) -> int:
    return a - b * euclidean_div(a, b)


def eval_expr(e: Expr, model: Model) -> Value:
    """Evaluate a program-variable-free expression under `model`."""
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, LogicVar):
        try:
            return model[e]
        except KeyError:
            raise KeyError(f"model assigns no value to {e.render()}") from None
    if isinstance(e, ProgVar):
        raise ValueError(f"cannot evaluate program variable '{e.name}'")
    if isinstance(e, Unary):
        v = eval_expr(e.arg, model)
        return -v if e.op is UnOp.NEG else not v
    if isinstance(e, Binary):
        if e.op is BinOp.AND:
            return bool(eval_expr(e.left, model)) and bool(eval_expr(e.right, model))
        if e.op is BinOp.OR:
            return bool(eval_expr(e.left, model)) or bool(eval_expr(e.right, model))
        if e.op is BinOp.IMPLIES:
            return (not eval_expr(e.left, model)) or bool(eval_expr(e.right, model))
        a = eval_expr(e.left, model)
        b = eval_expr(e.right, model)
        if e.op is BinOp.ADD:
            return a + b
        if e.op is BinOp.SUB:
            return a - b
        if e.op is BinOp.MUL:
            return a * b
        if e.op is BinOp.DIV:
            return euclidean_div(a, b)
        if e.op is BinOp.MOD:
            return euclidean_mod(a, b)
        if e.op is BinOp.LT:
            return a < b
        if e.op is BinOp.LE:
            return a <= b
        if e.op is BinOp.GT:
            return a > b
        if e.op is BinOp.GE:
            return a >= b
        if e.op is BinOp.EQ:
            return a == b
        if e.op is BinOp.NE:
            return a != b
    raise TypeError(f"not an expression: {e!r}")


def satisfies(f: Expr, model: Model) -> bool:
    """True iff `model` concretely satisfies `f`; division by zero and
    missing assignments count as not satisfying."""
    try:
        return eval_expr(f, model) is True
    except (EvalDivisionByZero, KeyError):
        return False


# ---------------------------------------------------------------------------
# Query simplification (solver-side; stronger than display folding)
# ---------------------------------------------------------------------------


def simplify(e: Expr) -> Expr:
    """Fold literal subterms and boolean identities. Division by zero is
    left unfolded for the obligation machinery to flag."""
    if isinstance(e, Unary):
        arg = simplify(e.arg)
        if e.op is UnOp.NOT:
            if isinstance(arg, BoolLit):
                return BoolLit(not arg.value)
            if isinstance(arg, Unary) and arg.op is UnOp.NOT:
                return arg.arg
        if e.op is UnOp.NEG and isinstance(arg, IntLit):
            return IntLit(-arg.value)
        return Unary(e.op, arg)
    if isinstance(e, Binary):
        left = simplify(e.left)
        right = simplify(e.right)
        if isinstance(left, (IntLit, BoolLit)) and isinstance(right, (IntLit, BoolLit)):
            try:
                v = eval_expr(Binary(e.op, left, right), {})
            except EvalDivisionByZero:
                return Binary(e.op, left, right)
            return IntLit(v) if isinstance(v, int) and not isinstance(v, bool) else BoolLit(v)
        if e.op is BinOp.AND:
            if left == BoolLit(False) or right == BoolLit(False):
                return BoolLit(False)
            if left == BoolLit(True):
                return right
            if right == BoolLit(True):
                return left
        if e.op is BinOp.OR:
            if left == BoolLit(True) or right == BoolLit(True):
                return BoolLit(True)
            if left == BoolLit(False):
                return right
            if right == BoolLit(False):
                return left
        if e.op is BinOp.IMPLIES:
            if left == BoolLit(False) or right == BoolLit(True):
                return BoolLit(True)
            if left == BoolLit(True):
                return right
        return Binary(e.op, left, right)
    return e


# ---------------------------------------------------------------------------
# SMT-LIB emission
# ---------------------------------------------------------------------------

_SMT_OP = {
    BinOp.ADD: "+",
    BinOp.SUB: "-",
    BinOp.MUL: "*",
    BinOp.DIV: "div",
    BinOp.MOD: "mod",
    BinOp.LT: "<",
    BinOp.LE: "<=",
    BinOp.GT: ">",
    BinOp.GE: ">=",
    BinOp.AND: "and",
    BinOp.OR: "or",
    BinOp.IMPLIES: "=>",
}

_SIMPLE_SYMBOL_CHARS = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789~!@$%^&*_+=<>.?/-"
)


def _smt_name(sym: str) -> str:
    simple = (
        sym
        and not sym[0].isdigit()
        and all(c in _SIMPLE_SYMBOL_CHARS for c in sym)
    )
    return sym if simple else f"|{sym}|"


def _smt_term(e: Expr) -> str:
    if isinstance(e, IntLit):
        return str(e.value) if e.value >= 0 else f"(- {-e.value})"
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, LogicVar):
        return _smt_name(e.smt_symbol())
    if isinstance(e, ProgVar):
        raise ValueError(f"program variable '{e.name}' in a solver query")
    if isinstance(e, Unary):
        arg = _smt_term(e.arg)
        return f"(- {arg})" if e.op is UnOp.NEG else f"(not {arg})"
    if isinstance(e, Binary):
        left, right = _smt_term(e.left), _smt_term(e.right)
        if e.op is BinOp.EQ:
            return f"(= {left} {right})"
        if e.op is BinOp.NE:
            return f"(not (= {left} {right}))"
        return f"({_SMT_OP[e.op]} {left} {right})"
    raise TypeError(f"not an expression: {e!r}")


def _is_nonlinear(e: Expr) -> bool:
    def constant(x: Expr) -> bool:
        return isinstance(x, IntLit) or (
            isinstance(x, Unary) and x.op is UnOp.NEG and constant(x.arg)
        )

    if isinstance(e, Binary):
        if e.op is BinOp.MUL and not constant(e.left) and not constant(e.right):
            return True
        if e.op in (BinOp.DIV, BinOp.MOD) and not constant(e.right):
            return True
        return _is_nonlinear(e.left) or _is_nonlinear(e.right)
    if isinstance(e, Unary):
        return _is_nonlinear(e.arg)
    return False


def to_smtlib(f: Expr) -> str:
    """Complete SMT-LIB v2 script deciding satisfiability of `f`."""
    logic = "QF_NIA" if _is_nonlinear(f) else "QF_LIA"
    lines = [f"(set-logic {logic})"]
    for var in sorted(logic_vars(f), key=lambda v: (v.name, v.index)):
        smt_sort = "Int" if var.sort is Sort.INT else "Bool"
        lines.append(f"(declare-const {_smt_name(var.smt_symbol())} {smt_sort})")
    lines.append(f"(assert {_smt_term(f)})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Model response parsing (s-expressions)
# ---------------------------------------------------------------------------


def _sexprs(text: str) -> list:
    tokens: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise MalformedModel("unterminated |symbol|")
            tokens.append(text[i : j + 1])
            i = j + 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in "()":
                i += 1
            tokens.append(text[start:i])
    out: list = []
    stack: list[list] = [out]
    for tok in tokens:
        if tok == "(":
            nested: list = []
            stack[-1].append(nested)
            stack.append(nested)
        elif tok == ")":
            if len(stack) == 1:
                raise MalformedModel("unbalanced ')'")
            stack.pop()
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise MalformedModel("unbalanced '('")
    return out


def _value_of(sexpr) -> Value:
    if sexpr == "true":
        return True
    if sexpr == "false":
        return False
    if isinstance(sexpr, str):
        try:
            return int(sexpr)
        except ValueError as exc:
            raise MalformedModel(f"unsupported model value {sexpr!r}") from exc
    if isinstance(sexpr, list) and len(sexpr) == 2 and sexpr[0] == "-":
        return -_value_of(sexpr[1])
    raise MalformedModel(f"unsupported model value {sexpr!r}")


def parse_model(text: str, variables: Sequence[LogicVar]) -> Model:
    """Extract assignments for `variables` from a solver's (get-model)
    output. Accepts both `(model (define-fun ...))` and bare
    `((define-fun ...))` shapes, and `(- N)` negatives."""
    by_symbol = {v.smt_symbol(): v for v in variables}
    model: Model = {}
    forms = _sexprs(text)
    items: list = []
    for form in forms:
        if isinstance(form, list):
            if form and form[0] == "model":
                items.extend(form[1:])
            else:
                items.extend(x for x in form if isinstance(x, list))
    for item in items:
        if not (isinstance(item, list) and len(item) >= 5 and item[0] == "define-fun"):
            continue
        name = item[1].strip("|") if isinstance(item[1], str) else None
        if name is None or item[2] != []:
            continue  # only zero-ary constants matter here
        var = by_symbol.get(name)
        if var is None:
            continue
        model[var] = _value_of(item[4])
    return model


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------


def _brute_force(f: Expr, bound: int) -> SatResult:
    variables = sorted(logic_vars(f), key=lambda v: (v.name, v.index))
    domains = []
    for v in variables:
        if v.sort is Sort.INT:
            domains.append(range(-bound, bound + 1))
        else:
            domains.append((False, True))
    for values in itertools.product(*domains):
        model = dict(zip(variables, values))
        if satisfies(f, model):
            return SatResult(Verdict.SAT, model)
    if any(v.sort is Sort.INT for v in variables):
        return SatResult(
            Verdict.UNKNOWN, reason=f"no witness within {{-{bound}..{bound}}}"
        )
    return SatResult(Verdict.UNSAT)


def _run_external(f: Expr, command: Sequence[str], timeout_ms: int) -> SatResult:
    script = to_smtlib(f)
    try:
        proc = subprocess.run(
            list(command),
            input=script.encode("utf-8"),
            capture_output=True,
            timeout=max(timeout_ms, 1) / 1000.0,
        )
    except FileNotFoundError as exc:
        raise SolverUnavailable(f"cannot spawn solver {command[0]!r}: {exc}") from exc
    except subprocess.TimeoutExpired:
        return SatResult(Verdict.UNKNOWN, reason=f"solver timeout after {timeout_ms} ms")
    out = proc.stdout.decode("utf-8", "replace")
    lines = out.splitlines()
    verdict_line = lines[0].strip() if lines else ""
    if verdict_line == "unsat":
        return SatResult(Verdict.UNSAT)
    if verdict_line != "sat":
        return SatResult(Verdict.UNKNOWN, reason=f"solver said {verdict_line or '<nothing>'!r}")
    variables = sorted(logic_vars(f), key=lambda v: (v.name, v.index))
    try:
        model = parse_model("\n".join(lines[1:]), variables)
    except MalformedModel as exc:
        return SatResult(Verdict.UNKNOWN, reason=f"malformed model: {exc}")
    for v in variables:  # solvers may omit don't-cares
        model.setdefault(v, 0 if v.sort is Sort.INT else False)
    if not satisfies(f, model):
        return SatResult(Verdict.UNKNOWN, reason="model failed concrete validation")
    return SatResult(Verdict.SAT, model)


# ---------------------------------------------------------------------------
# Public interface
# ---------------------------------------------------------------------------


class Entailment(Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EntailmentResult:
    verdict: Entailment
    model: Optional[Model] = None  # countermodel, present iff INVALID


class Solver:
    """Stateless per-query solving with a per-instance result cache.

    Path conditions repeat heavily across eager prunes, so identical
    (simplified) queries are answered once. Safe because queries are pure.
    """

    def __init__(self, config: SolverConfig):
        self.config = config
        self.calls = 0
        self._cache: dict[Expr, SatResult] = {}

    def check_sat(self, f: Expr) -> SatResult:
        hit = self._cache.get(f)
        if hit is not None:
            return hit
        simplified = simplify(f)
        if isinstance(simplified, BoolLit):
            # Ground after folding: no backend needed. Keeps trivially-false
            # obligations discharging even when no solver exists at all.
            if simplified.value:
                model: Model = {
                    v: (0 if v.sort is Sort.INT else False) for v in logic_vars(f)
                }
                result = (
                    SatResult(Verdict.SAT, model)
                    if satisfies(f, model)
                    else SatResult(Verdict.UNKNOWN, reason="partial subterm")
                )
            else:
                result = SatResult(Verdict.UNSAT)
            self._cache[f] = result
            return result
        self.calls += 1
        backend = self.config.backend
        if isinstance(backend, BruteForce):
            result = _brute_force(simplified, backend.bound)
        else:
            try:
                result = _run_external(simplified, backend.command, self.config.timeout_ms)
            except SolverUnavailable as exc:
                result = SatResult(Verdict.UNKNOWN, reason=str(exc))
        if result.verdict is Verdict.SAT:
            # simplification may have dropped variables of the original
            # query; the model must assign all of them and satisfy it
            model = dict(result.model or {})
            for var in logic_vars(f):
                model.setdefault(var, 0 if var.sort is Sort.INT else False)
            if satisfies(f, model):
                result = SatResult(Verdict.SAT, model)
            else:
                result = SatResult(
                    Verdict.UNKNOWN, reason="model lost under simplification"
                )
        self._cache[f] = result
        return result

    def entails(self, hypothesis: Expr, conclusion: Expr) -> EntailmentResult:
        """Whether hypothesis ==> conclusion is valid (unsat of h and not-c)."""
        query = Binary(BinOp.AND, hypothesis, Unary(UnOp.NOT, conclusion))
        result = self.check_sat(query)
        if result.verdict is Verdict.UNSAT:
            return EntailmentResult(Entailment.VALID)
        if result.verdict is Verdict.SAT:
            return EntailmentResult(Entailment.INVALID, result.model)
        return EntailmentResult(Entailment.UNKNOWN)


def check_sat(f: Expr, config: SolverConfig) -> SatResult:
    return Solver(config).check_sat(f)


def entails(hypothesis: Expr, conclusion: Expr, config: SolverConfig) -> EntailmentResult:
    return Solver(config).entails(hypothesis, conclusion)
