"""MiniVer language: AST, parser, static checks."""

from .ast import (
    Assert,
    Assign,
    Assume,
    Binary,
    BinOp,
    BoolLit,
    Call,
    Expr,
    free_vars,
    GlobalDecl,
    If,
    IntLit,
    loc_of,
    LocalDecl,
    logic_vars,
    LogicVar,
    modified_vars,
    ObligationKind,
    pretty,
    pretty_unit,
    Procedure,
    ProgVar,
    Sort,
    sort_of,
    SourceLoc,
    statement_lines,
    Stmt,
    TranslationUnit,
    TRUE,
    FALSE,
    Unary,
    UnOp,
    While,
)
from .check import check_expression, check_unit
from .parser import Diagnostic, ParseError, parse_expression, parse_program, parse_unit

__all__ = [
    "Assert",
    "Assign",
    "Assume",
    "Binary",
    "BinOp",
    "BoolLit",
    "Call",
    "Diagnostic",
    "Expr",
    "FALSE",
    "GlobalDecl",
    "If",
    "IntLit",
    "LocalDecl",
    "LogicVar",
    "ObligationKind",
    "ParseError",
    "Procedure",
    "ProgVar",
    "Sort",
    "SourceLoc",
    "Stmt",
    "TRUE",
    "TranslationUnit",
    "UnOp",
    "Unary",
    "While",
    "check_expression",
    "check_unit",
    "free_vars",
    "loc_of",
    "logic_vars",
    "modified_vars",
    "parse_expression",
    "parse_program",
    "parse_unit",
    "pretty",
    "pretty_unit",
    "sort_of",
    "statement_lines",
]
