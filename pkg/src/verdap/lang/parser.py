"""Recursive-descent parser for MiniVer.

Grammar (whitespace-insensitive, `//` line comments):

    unit     := (global | proc)*
    global   := "var" ident ":" sort "=" expr ";"
    proc     := "proc" ident "(" [param ("," param)*] ")" [":" sort]
                ["requires" expr ";"] ["ensures" expr ";"] block
    param    := ident ":" sort            sort := "int" | "bool"
    block    := "{" stmt* "}"
    stmt     := ident "=" expr ";" | "var" ident ":" sort "=" expr ";"
              | "assume" expr ";" | "assert" expr ";"
              | "if" "(" expr ")" block ["else" block]
              | "while" "(" expr ")" "invariant" expr ";" block
              | [ident "="] ident "(" [expr ("," expr)*] ")" ";"

Expressions use C-like precedence (`==>` lowest and right-associative, then
`||`, `&&`, equality, relational, additive, multiplicative, unary `!`/`-`),
with `else` binding to the nearest `if`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    Assert,
    Assign,
    Assume,
    Binary,
    BinOp,
    BoolLit,
    Call,
    Expr,
    GlobalDecl,
    If,
    IntLit,
    LocalDecl,
    Procedure,
    ProgVar,
    Sort,
    SourceLoc,
    Stmt,
    TranslationUnit,
    TRUE,
    UnOp,
    Unary,
    While,
)

KEYWORDS = frozenset(
    {
        "var",
        "proc",
        "requires",
        "ensures",
        "assume",
        "assert",
        "if",
        "else",
        "while",
        "invariant",
        "true",
        "false",
        "int",
        "bool",
        "result",
    }
)

# Longest first, so `==>` wins over `==` wins over `=`.
_PUNCT = (
    "==>",
    "==",
    "!=",
    "<=",
    ">=",
    "&&",
    "||",
    "<",
    ">",
    "+",
    "-",
    "*",
    "/",
    "%",
    "!",
    "=",
    "(",
    ")",
    "{",
    "}",
    ",",
    ";",
    ":",
)


@dataclass(frozen=True)
class Diagnostic:
    loc: SourceLoc
    message: str
    kind: str  # "syntax" | "type" | "resolution"

    def __str__(self) -> str:
        return f"{self.loc}: {self.kind} error: {self.message}"


class ParseError(Exception):
    """Raised when parsing or checking fails; carries all diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "keyword", "punct", "eof"
    text: str
    line: int
    column: int


def tokenize(source: str, file: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(Token("int", source[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            text = source[start:i]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, line, col))
            col += i - start
            continue
        for punct in _PUNCT:
            if source.startswith(punct, i):
                tokens.append(Token("punct", punct, line, col))
                i += len(punct)
                col += len(punct)
                break
        else:
            raise ParseError(
                [Diagnostic(SourceLoc(file, line, col), f"unexpected character {ch!r}", "syntax")]
            )
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.tokens = tokens
        self.file = file
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def loc(self, tok: Token | None = None) -> SourceLoc:
        tok = tok or self.cur
        return SourceLoc(self.file, tok.line, tok.column)

    def error(self, message: str) -> ParseError:
        return ParseError([Diagnostic(self.loc(), message, "syntax")])

    def at(self, text: str) -> bool:
        return self.cur.text == text and self.cur.kind in ("punct", "keyword")

    def eat(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.cur.text!r}")
        tok = self.cur
        self.pos += 1
        return tok

    def eat_ident(self, what: str = "identifier") -> Token:
        if self.cur.kind != "ident":
            raise self.error(f"expected {what}, found {self.cur.text!r}")
        tok = self.cur
        self.pos += 1
        return tok

    # -- grammar -----------------------------------------------------------

    def unit(self) -> TranslationUnit:
        globals_: list[GlobalDecl] = []
        procs: list[Procedure] = []
        while self.cur.kind != "eof":
            if self.at("var"):
                globals_.append(self.global_decl())
            elif self.at("proc"):
                procs.append(self.proc())
            else:
                raise self.error(f"expected 'var' or 'proc', found {self.cur.text!r}")
        return TranslationUnit(tuple(globals_), tuple(procs))

    def sort(self) -> Sort:
        if self.at("int"):
            self.eat("int")
            return Sort.INT
        if self.at("bool"):
            self.eat("bool")
            return Sort.BOOL
        raise self.error(f"expected 'int' or 'bool', found {self.cur.text!r}")

    def global_decl(self) -> GlobalDecl:
        loc = self.loc()
        self.eat("var")
        name = self.eat_ident().text
        self.eat(":")
        sort = self.sort()
        self.eat("=")
        init = self.expr()
        self.eat(";")
        return GlobalDecl(name, sort, init, loc)

    def proc(self) -> Procedure:
        loc = self.loc()
        self.eat("proc")
        name = self.eat_ident("procedure name").text
        self.eat("(")
        params: list[tuple[str, Sort]] = []
        if not self.at(")"):
            while True:
                pname = self.eat_ident("parameter name").text
                self.eat(":")
                params.append((pname, self.sort()))
                if not self.at(","):
                    break
                self.eat(",")
        self.eat(")")
        return_sort = None
        if self.at(":"):
            self.eat(":")
            return_sort = self.sort()
        requires: Expr = TRUE
        requires_loc = None
        if self.at("requires"):
            requires_loc = self.loc()
            self.eat("requires")
            requires = self.expr()
            self.eat(";")
        ensures: Expr = TRUE
        ensures_loc = None
        if self.at("ensures"):
            ensures_loc = self.loc()
            self.eat("ensures")
            ensures = self.expr()
            self.eat(";")
        body = self.block()
        return Procedure(
            name,
            tuple(params),
            return_sort,
            requires,
            ensures,
            body,
            loc,
            requires_loc,
            ensures_loc,
        )

    def block(self) -> tuple[Stmt, ...]:
        self.eat("{")
        stmts: list[Stmt] = []
        while not self.at("}"):
            if self.cur.kind == "eof":
                raise self.error("unterminated block, expected '}'")
            stmts.append(self.stmt())
        self.eat("}")
        return tuple(stmts)

    def stmt(self) -> Stmt:
        loc = self.loc()
        if self.at("var"):
            self.eat("var")
            name = self.eat_ident().text
            self.eat(":")
            sort = self.sort()
            self.eat("=")
            init = self.expr()
            self.eat(";")
            return LocalDecl(name, sort, init, loc)
        if self.at("assume"):
            self.eat("assume")
            cond = self.expr()
            self.eat(";")
            return Assume(cond, loc)
        if self.at("assert"):
            self.eat("assert")
            cond = self.expr()
            self.eat(";")
            return Assert(cond, loc)
        if self.at("if"):
            self.eat("if")
            self.eat("(")
            cond = self.expr()
            self.eat(")")
            then_body = self.block()
            else_body: tuple[Stmt, ...] = ()
            if self.at("else"):
                self.eat("else")
                else_body = self.block()
            return If(cond, then_body, else_body, loc)
        if self.at("while"):
            self.eat("while")
            self.eat("(")
            cond = self.expr()
            self.eat(")")
            self.eat("invariant")
            invariant = self.expr()
            self.eat(";")
            body = self.block()
            return While(cond, invariant, body, loc)
        # Remaining forms start with an identifier (or `result`):
        #   ident = expr ;   |   ident = callee(...) ;   |   callee(...) ;
        if self.cur.kind == "ident" or self.at("result"):
            first = self.cur
            if self.peek().text == "(" and self.cur.kind == "ident":
                self.pos += 1
                return self.call_stmt(None, first.text, loc)
            if self.peek().text == "=":
                target = first.text
                self.pos += 2
                if self.cur.kind == "ident" and self.peek().text == "(":
                    callee = self.cur.text
                    self.pos += 1
                    return self.call_stmt(target, callee, loc)
                rhs = self.expr()
                self.eat(";")
                return Assign(target, rhs, loc)
        raise self.error(f"expected a statement, found {self.cur.text!r}")

    def call_stmt(self, result: str | None, callee: str, loc: SourceLoc) -> Call:
        self.eat("(")
        args: list[Expr] = []
        if not self.at(")"):
            while True:
                args.append(self.expr())
                if not self.at(","):
                    break
                self.eat(",")
        self.eat(")")
        self.eat(";")
        return Call(result, callee, tuple(args), loc)

    # -- expressions (precedence climbing) ----------------------------------

    def expr(self) -> Expr:
        return self.implies()

    def implies(self) -> Expr:
        left = self.disjunction()
        if self.at("==>"):
            self.eat("==>")
            return Binary(BinOp.IMPLIES, left, self.implies())  # right-assoc
        return left

    def _left_chain(self, sub, table: dict[str, BinOp]) -> Expr:
        left = sub()
        while self.cur.text in table and self.cur.kind == "punct":
            op = table[self.cur.text]
            self.pos += 1
            left = Binary(op, left, sub())
        return left

    def disjunction(self) -> Expr:
        return self._left_chain(self.conjunction, {"||": BinOp.OR})

    def conjunction(self) -> Expr:
        return self._left_chain(self.equality, {"&&": BinOp.AND})

    def equality(self) -> Expr:
        return self._left_chain(self.relational, {"==": BinOp.EQ, "!=": BinOp.NE})

    def relational(self) -> Expr:
        return self._left_chain(
            self.additive,
            {"<": BinOp.LT, "<=": BinOp.LE, ">": BinOp.GT, ">=": BinOp.GE},
        )

    def additive(self) -> Expr:
        return self._left_chain(self.multiplicative, {"+": BinOp.ADD, "-": BinOp.SUB})

    def multiplicative(self) -> Expr:
        return self._left_chain(self.unary, {"*": BinOp.MUL, "/": BinOp.DIV, "%": BinOp.MOD})

    def unary(self) -> Expr:
        if self.at("!"):
            self.eat("!")
            return Unary(UnOp.NOT, self.unary())
        if self.at("-"):
            self.eat("-")
            return Unary(UnOp.NEG, self.unary())
        return self.primary()

    def primary(self) -> Expr:
        tok = self.cur
        if tok.kind == "int":
            self.pos += 1
            return IntLit(int(tok.text))
        if self.at("true"):
            self.pos += 1
            return TRUE
        if self.at("false"):
            self.pos += 1
            return BoolLit(False)
        if self.at("result"):
            self.pos += 1
            return ProgVar("result")
        if tok.kind == "ident":
            self.pos += 1
            return ProgVar(tok.text)
        if self.at("("):
            self.eat("(")
            e = self.expr()
            self.eat(")")
            return e
        raise self.error(f"expected an expression, found {tok.text!r}")


def parse_unit(source: str, file: str = "<input>") -> TranslationUnit:
    """Parse without type checking (see parse_program for the checked entry)."""
    parser = _Parser(tokenize(source, file), file)
    return parser.unit()


def parse_expression(text: str, file: str = "<expr>") -> Expr:
    """Parse a single expression (used by the debugger's Evaluate request)."""
    parser = _Parser(tokenize(text, file), file)
    e = parser.expr()
    if parser.cur.kind != "eof":
        raise parser.error(f"unexpected trailing input {parser.cur.text!r}")
    return e


def parse_program(source: str, file: str = "<input>") -> TranslationUnit:
    """Parse and type-check a MiniVer program.

    Returns the checked unit; raises ParseError carrying diagnostics on any
    syntax, type, or resolution failure.
    """
    from .check import check_unit  # local import to avoid a cycle

    tu = parse_unit(source, file)
    check_unit(tu)
    return tu
