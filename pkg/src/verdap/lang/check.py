"""Static checks for MiniVer: two-sort typing, name resolution, contract
scoping, and definite assignment of `result`.

Rules beyond the obvious:
  * globals and procedure names share one namespace;
  * global initializers may reference only earlier globals and literals;
  * parameters and globals are immutable inside procedure bodies;
  * `result` is assignable (and only assignable) in procedures with a return
    sort, must be assigned on every path, and is readable only in `ensures`;
  * locals may shadow globals but not parameters or other visible locals.
"""

from __future__ import annotations

from .ast import (
    ARITH_OPS,
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
    LogicVar,
    Procedure,
    ProgVar,
    Sort,
    SourceLoc,
    TranslationUnit,
    UnOp,
    Unary,
    While,
)
from .parser import Diagnostic, ParseError


class _Checker:
    def __init__(self, tu: TranslationUnit):
        self.tu = tu
        self.diagnostics: list[Diagnostic] = []
        self.globals: dict[str, Sort] = {}
        self.procs: dict[str, Procedure] = {}

    def error(self, loc: SourceLoc, message: str, kind: str = "type") -> None:
        self.diagnostics.append(Diagnostic(loc, message, kind))

    # -- expression typing ---------------------------------------------------

    def sort_of(self, e: Expr, env: dict[str, Sort], loc: SourceLoc) -> Sort | None:
        """Infer the sort of `e` under `env`, or None after reporting."""
        if isinstance(e, IntLit):
            return Sort.INT
        if isinstance(e, BoolLit):
            return Sort.BOOL
        if isinstance(e, LogicVar):
            return e.sort
        if isinstance(e, ProgVar):
            if e.name in env:
                return env[e.name]
            self.error(loc, f"unknown identifier '{e.name}'", "resolution")
            return None
        if isinstance(e, Unary):
            want = Sort.INT if e.op is UnOp.NEG else Sort.BOOL
            got = self.sort_of(e.arg, env, loc)
            if got is not None and got is not want:
                self.error(loc, f"operator '{e.op.value}' expects {want}, found {got}")
            return want
        if isinstance(e, Binary):
            left = self.sort_of(e.left, env, loc)
            right = self.sort_of(e.right, env, loc)
            operand = Sort.BOOL if e.op in (BinOp.AND, BinOp.OR, BinOp.IMPLIES) else Sort.INT
            for got, side in ((left, "left"), (right, "right")):
                if got is not None and got is not operand:
                    self.error(
                        loc,
                        f"{side} operand of '{e.op.value}' expects {operand}, found {got}",
                    )
            return Sort.INT if e.op in ARITH_OPS else Sort.BOOL
        raise TypeError(f"not an expression: {e!r}")

    def expect(self, e: Expr, want: Sort, env: dict[str, Sort], loc: SourceLoc, what: str) -> None:
        got = self.sort_of(e, env, loc)
        if got is not None and got is not want:
            self.error(loc, f"{what} must be {want}, found {got}")

    def literals_and_earlier_globals_only(self, e: Expr, seen: set[str], loc: SourceLoc) -> None:
        if isinstance(e, ProgVar):
            if e.name == "result" or e.name not in seen:
                self.error(
                    loc,
                    f"global initializer may reference only earlier globals, not '{e.name}'",
                    "resolution",
                )
        elif isinstance(e, Unary):
            self.literals_and_earlier_globals_only(e.arg, seen, loc)
        elif isinstance(e, Binary):
            self.literals_and_earlier_globals_only(e.left, seen, loc)
            self.literals_and_earlier_globals_only(e.right, seen, loc)

    # -- declarations ----------------------------------------------------------

    def check(self) -> None:
        names: set[str] = set()
        seen_globals: set[str] = set()
        for g in self.tu.globals:
            if g.name in names:
                self.error(g.loc, f"duplicate declaration of '{g.name}'", "resolution")
            names.add(g.name)
            self.literals_and_earlier_globals_only(g.init, seen_globals, g.loc)
            env = {name: self.globals[name] for name in seen_globals}
            self.expect(g.init, g.sort, env, g.loc, f"initializer of '{g.name}'")
            self.globals[g.name] = g.sort
            seen_globals.add(g.name)
        for proc in self.tu.procedures:
            if proc.name in names:
                self.error(proc.loc, f"duplicate declaration of '{proc.name}'", "resolution")
            names.add(proc.name)
            self.procs[proc.name] = proc
        for proc in self.tu.procedures:
            self.check_proc(proc)

    def check_proc(self, proc: Procedure) -> None:
        param_env: dict[str, Sort] = {}
        for name, sort in proc.params:
            if name in param_env:
                self.error(proc.loc, f"duplicate parameter '{name}'", "resolution")
            param_env[name] = sort
        contract_env = dict(self.globals)
        contract_env.update(param_env)
        self.expect(
            proc.requires, Sort.BOOL, contract_env, proc.requires_loc or proc.loc, "requires"
        )
        ensures_env = dict(contract_env)
        if proc.return_sort is not None:
            ensures_env["result"] = proc.return_sort
        ensures_loc = proc.ensures_loc or proc.loc
        if proc.return_sort is None and "result" in _prog_vars(proc.ensures):
            self.error(ensures_loc, "'result' requires a return sort", "resolution")
        self.expect(proc.ensures, Sort.BOOL, ensures_env, ensures_loc, "ensures")

        self.check_body(proc.body, proc, {}, [set()])
        if proc.return_sort is not None and not _assigns_result(proc.body):
            self.error(
                proc.loc,
                f"procedure '{proc.name}' must assign 'result' on every path",
                "resolution",
            )

    # -- statements --------------------------------------------------------------

    def check_body(
        self,
        body,
        proc: Procedure,
        locals_: dict[str, Sort],
        blocks: list[set[str]],
    ) -> None:
        """Check a statement list. `locals_` maps all locals visible here;
        `blocks` tracks which are still in scope per nesting level."""

        def body_env() -> dict[str, Sort]:
            e = dict(self.globals)
            e.update(dict(proc.params))
            e.update(locals_)
            return e

        params = {name for name, _ in proc.params}
        for stmt in body:
            if isinstance(stmt, LocalDecl):
                if stmt.name in params or stmt.name in locals_ or stmt.name == "result":
                    self.error(stmt.loc, f"duplicate declaration of '{stmt.name}'", "resolution")
                self._check_read(stmt.init, body_env(), stmt.loc)
                self.expect(stmt.init, stmt.sort, body_env(), stmt.loc, f"initializer of '{stmt.name}'")
                locals_[stmt.name] = stmt.sort
                blocks[-1].add(stmt.name)
            elif isinstance(stmt, Assign):
                self._check_read(stmt.rhs, body_env(), stmt.loc)
                target_sort = self._assignable(stmt.target, proc, locals_, stmt.loc)
                if target_sort is not None:
                    self.expect(stmt.rhs, target_sort, body_env(), stmt.loc, f"value for '{stmt.target}'")
            elif isinstance(stmt, Assume):
                self._check_read(stmt.cond, body_env(), stmt.loc)
                self.expect(stmt.cond, Sort.BOOL, body_env(), stmt.loc, "assume condition")
            elif isinstance(stmt, Assert):
                self._check_read(stmt.cond, body_env(), stmt.loc)
                self.expect(stmt.cond, Sort.BOOL, body_env(), stmt.loc, "assert condition")
            elif isinstance(stmt, If):
                self._check_read(stmt.cond, body_env(), stmt.loc)
                self.expect(stmt.cond, Sort.BOOL, body_env(), stmt.loc, "if condition")
                self._check_block(stmt.then_body, proc, locals_, blocks)
                self._check_block(stmt.else_body, proc, locals_, blocks)
            elif isinstance(stmt, While):
                self._check_read(stmt.cond, body_env(), stmt.loc)
                self.expect(stmt.cond, Sort.BOOL, body_env(), stmt.loc, "loop condition")
                self._check_read(stmt.invariant, body_env(), stmt.loc)
                self.expect(stmt.invariant, Sort.BOOL, body_env(), stmt.loc, "loop invariant")
                self._check_block(stmt.body, proc, locals_, blocks)
            elif isinstance(stmt, Call):
                self._check_call(stmt, proc, locals_, body_env())
            else:
                raise TypeError(f"not a statement: {stmt!r}")

    def _check_block(self, body, proc, locals_, blocks) -> None:
        blocks.append(set())
        self.check_body(body, proc, locals_, blocks)
        for name in blocks.pop():
            del locals_[name]

    def _check_read(self, e: Expr, env: dict[str, Sort], loc: SourceLoc) -> None:
        if "result" in _prog_vars(e):
            self.error(loc, "'result' cannot be read in a body (only in ensures)", "resolution")

    def _assignable(self, target: str, proc: Procedure, locals_, loc: SourceLoc) -> Sort | None:
        if target == "result":
            if proc.return_sort is None:
                self.error(loc, f"'{proc.name}' has no return sort", "resolution")
                return None
            return proc.return_sort
        if target in locals_:
            return locals_[target]
        if target in {name for name, _ in proc.params}:
            self.error(loc, f"cannot assign to parameter '{target}'", "resolution")
            return None
        if target in self.globals:
            self.error(loc, f"cannot assign to global '{target}' in a body", "resolution")
            return None
        self.error(loc, f"unknown identifier '{target}'", "resolution")
        return None

    def _check_call(self, stmt: Call, proc: Procedure, locals_, env: dict[str, Sort]) -> None:
        callee = self.procs.get(stmt.callee)
        if callee is None:
            self.error(stmt.loc, f"unknown procedure '{stmt.callee}'", "resolution")
            return
        if len(stmt.args) != len(callee.params):
            self.error(
                stmt.loc,
                f"'{stmt.callee}' expects {len(callee.params)} argument(s), got {len(stmt.args)}",
                "resolution",
            )
        for arg, (pname, psort) in zip(stmt.args, callee.params):
            self._check_read(arg, env, stmt.loc)
            self.expect(arg, psort, env, stmt.loc, f"argument '{pname}' of '{stmt.callee}'")
        if stmt.result is not None:
            if callee.return_sort is None:
                self.error(stmt.loc, f"'{stmt.callee}' returns no value", "type")
                return
            target_sort = self._assignable(stmt.result, proc, locals_, stmt.loc)
            if target_sort is not None and target_sort is not callee.return_sort:
                self.error(
                    stmt.loc,
                    f"result of '{stmt.callee}' is {callee.return_sort}, "
                    f"cannot assign to {target_sort} '{stmt.result}'",
                )


def _prog_vars(e: Expr) -> set[str]:
    if isinstance(e, ProgVar):
        return {e.name}
    if isinstance(e, Unary):
        return _prog_vars(e.arg)
    if isinstance(e, Binary):
        return _prog_vars(e.left) | _prog_vars(e.right)
    return set()


def _assigns_result(body) -> bool:
    for stmt in body:
        if isinstance(stmt, Assign) and stmt.target == "result":
            return True
        if isinstance(stmt, Call) and stmt.result == "result":
            return True
        if isinstance(stmt, If):
            if (
                stmt.else_body
                and _assigns_result(stmt.then_body)
                and _assigns_result(stmt.else_body)
            ):
                return True
    return False


def check_unit(tu: TranslationUnit) -> None:
    checker = _Checker(tu)
    checker.check()
    if checker.diagnostics:
        raise ParseError(checker.diagnostics)


def check_expression(e: Expr, env: dict[str, Sort]) -> Sort:
    """Type-check a standalone expression against a name/sort environment
    (the debugger's Evaluate request). Returns its sort."""
    tu = TranslationUnit()
    checker = _Checker(tu)
    loc = SourceLoc("<expr>", 1, 1)
    sort = checker.sort_of(e, env, loc)
    if checker.diagnostics:
        raise ParseError(checker.diagnostics)
    assert sort is not None
    return sort
