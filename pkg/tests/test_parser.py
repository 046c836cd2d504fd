import pytest
from hypothesis import given, settings, strategies as st

from verdap.lang import (
    Binary,
    BinOp,
    IntLit,
    ParseError,
    ProgVar,
    Sort,
    TRUE,
    Unary,
    UnOp,
    parse_expression,
    parse_program,
    pretty,
    pretty_unit,
)
from verdap.lang.ast import If, While


def strip_locs(tu):
    """Structural fingerprint of a unit, ignoring source locations."""

    def stmt_key(s):
        name = type(s).__name__
        if isinstance(s, If):
            return (name, s.cond, tuple(map(stmt_key, s.then_body)), tuple(map(stmt_key, s.else_body)))
        if isinstance(s, While):
            return (name, s.cond, s.invariant, tuple(map(stmt_key, s.body)))
        fields = {k: v for k, v in vars(s).items() if k != "loc"}
        return (name, tuple(sorted(fields.items(), key=lambda kv: kv[0])))

    return (
        tuple((g.name, g.sort, g.init) for g in tu.globals),
        tuple(
            (p.name, p.params, p.return_sort, p.requires, p.ensures, tuple(map(stmt_key, p.body)))
            for p in tu.procedures
        ),
    )


class TestParsing:
    def test_abs_program(self, abs_source):
        tu = parse_program(abs_source, "abs.mv")
        assert len(tu.procedures) == 1
        proc = tu.procedures[0]
        assert proc.name == "abs"
        assert proc.params == (("x", Sort.INT),)
        assert proc.return_sort is Sort.INT
        assert proc.requires == TRUE  # omitted contracts default to true
        assert proc.ensures == Binary(BinOp.GE, ProgVar("result"), IntLit(0))
        assert isinstance(proc.body[0], If)

    def test_empty_input(self):
        tu = parse_program("", "empty.mv")
        assert tu.globals == ()
        assert tu.procedures == ()

    def test_unknown_identifier_is_resolution_error(self):
        with pytest.raises(ParseError) as err:
            parse_program("proc f() { x = 1; }", "f.mv")
        assert any(d.kind == "resolution" for d in err.value.diagnostics)
        assert any("x" in d.message for d in err.value.diagnostics)

    def test_locations_are_one_based_and_in_bounds(self):
        source = "proc f() {\n    var t: int = 1;\n    assert t > 0;\n}\n"
        tu = parse_program(source, "f.mv")
        decl, check = tu.procedures[0].body
        assert (decl.loc.line, decl.loc.column) == (2, 5)
        assert (check.loc.line, check.loc.column) == (3, 5)

    def test_comments_and_whitespace(self):
        source = "// leading\nproc f( ) {\n  // inner\n  assume true;\n}\n"
        tu = parse_program(source, "f.mv")
        assert len(tu.procedures[0].body) == 1

    def test_else_binds_to_nearest_if(self):
        source = "proc f(a: int) { var c: int = 0; if (a > 0) { if (a > 1) { c = 1; } else { c = 2; } } }"
        tu = parse_program(source, "f.mv")
        outer = tu.procedures[0].body[1]
        assert outer.else_body == ()
        inner = outer.then_body[0]
        assert len(inner.else_body) == 1

    def test_call_forms(self):
        source = (
            "proc g(v: int): int { result = v; }\n"
            "proc f() { var r: int = 0; r = g(1); g(r); }\n"
        )
        tu = parse_program(source, "f.mv")
        _, with_result, bare = tu.procedures[1].body
        assert with_result.result == "r" and with_result.callee == "g"
        assert bare.result is None and bare.callee == "g"

    def test_syntax_error_reports_location(self):
        with pytest.raises(ParseError) as err:
            parse_program("proc f() { assume ; }", "f.mv")
        diag = err.value.diagnostics[0]
        assert diag.kind == "syntax"
        assert diag.loc.line == 1 and diag.loc.column >= 1


class TestPrecedence:
    def test_arithmetic_over_comparison(self):
        e = parse_expression("a + b * c < d")
        assert e == Binary(
            BinOp.LT,
            Binary(BinOp.ADD, ProgVar("a"), Binary(BinOp.MUL, ProgVar("b"), ProgVar("c"))),
            ProgVar("d"),
        )

    def test_implication_is_right_associative_and_lowest(self):
        e = parse_expression("a > 0 ==> b > 0 ==> c > 0")
        assert e.op is BinOp.IMPLIES
        assert e.right.op is BinOp.IMPLIES

    def test_equality_below_relational(self):
        e = parse_expression("a < b == c < d")
        assert e.op is BinOp.EQ
        assert e.left.op is BinOp.LT and e.right.op is BinOp.LT

    def test_unary_binds_tightest(self):
        assert parse_expression("-a + b") == Binary(
            BinOp.ADD, Unary(UnOp.NEG, ProgVar("a")), ProgVar("b")
        )
        assert parse_expression("!a && b") == Binary(
            BinOp.AND, Unary(UnOp.NOT, ProgVar("a")), ProgVar("b")
        )

    def test_parentheses_override(self):
        e = parse_expression("(a + b) * c")
        assert e.op is BinOp.MUL and e.left.op is BinOp.ADD

    def test_result_keyword_in_expression(self):
        assert parse_expression("result >= 0") == Binary(
            BinOp.GE, ProgVar("result"), IntLit(0)
        )


class TestTypeChecking:
    @pytest.mark.parametrize(
        "source,needle",
        [
            ("proc f(a: int) { assume a; }", "bool"),
            ("proc f(a: bool) { var c: int = a + 1; }", "int"),
            ("proc f(a: bool, b: bool) { assume a == b; }", "int"),
            ("proc f(a: int) { a = 1; }", "parameter"),
            ("var g: int = 0; proc f() { g = 1; }", "global"),
            ("proc f() { var c: int = 0; var c: int = 1; }", "duplicate"),
            ("proc f(a: int, a: int) { }", "duplicate"),
            ("proc f() { result = 1; }", "return sort"),
            ("proc f(): int { var c: int = result; result = 1; }", "ensures"),
            ("proc f(): int ensures result >= 0; { assume true; }", "every path"),
            ("proc g() { } proc f() { g(1); }", "argument"),
            ("proc f() { g(); }", "unknown procedure"),
            ("proc f() ensures result >= 0; { }", "result"),
            ("var g: int = h; var h: int = 0; proc f() { }", "earlier globals"),
        ],
    )
    def test_rejects(self, source, needle):
        with pytest.raises(ParseError) as err:
            parse_program(source, "t.mv")
        assert any(needle in d.message for d in err.value.diagnostics), err.value.diagnostics

    def test_result_assignment_via_branches_satisfies_definite_assignment(self):
        parse_program(
            "proc f(a: int): int { if (a > 0) { result = a; } else { result = 0; } }",
            "t.mv",
        )

    def test_local_may_shadow_global(self):
        parse_program("var g: int = 0; proc f() { var g: int = 1; g = 2; }", "t.mv")

    def test_diagnostics_within_input_bounds(self):
        source = "proc f(a: bool) {\n    assume a + 1 > 0;\n}\n"
        lines = source.splitlines()
        with pytest.raises(ParseError) as err:
            parse_program(source, "t.mv")
        for diag in err.value.diagnostics:
            assert 1 <= diag.loc.line <= len(lines)
            assert 1 <= diag.loc.column <= len(lines[diag.loc.line - 1]) + 1


class TestRoundTrip:
    @pytest.mark.parametrize(
        "name", ["abs.mv", "abs_bad.mv", "quot.mv", "count.mv", "calls.mv"]
    )
    def test_fixture_round_trip(self, data_dir, name):
        source = (data_dir / name).read_text()
        once = parse_program(source, name)
        again = parse_program(pretty_unit(once), name)
        assert strip_locs(once) == strip_locs(again)

    def test_globals_round_trip(self):
        source = "var g: int = 3;\nvar h: bool = true;\nproc main() { assert g == 3; }\n"
        once = parse_program(source, "g.mv")
        again = parse_program(pretty_unit(once), "g.mv")
        assert strip_locs(once) == strip_locs(again)


# Well-typed random integer expressions over two int variables.
def int_exprs(depth: int = 3):
    leaves = st.one_of(
        st.integers(min_value=0, max_value=9).map(IntLit),
        st.sampled_from([ProgVar("a"), ProgVar("b")]),
    )

    def extend(children):
        return st.one_of(
            st.tuples(
                st.sampled_from([BinOp.ADD, BinOp.SUB, BinOp.MUL, BinOp.DIV, BinOp.MOD]),
                children,
                children,
            ).map(lambda t: Binary(*t)),
            children.map(lambda e: Unary(UnOp.NEG, e)),
        )

    return st.recursive(leaves, extend, max_leaves=8)


def bool_exprs():
    comparisons = st.tuples(
        st.sampled_from([BinOp.LT, BinOp.LE, BinOp.GT, BinOp.GE, BinOp.EQ, BinOp.NE]),
        int_exprs(),
        int_exprs(),
    ).map(lambda t: Binary(*t))

    def extend(children):
        return st.one_of(
            st.tuples(
                st.sampled_from([BinOp.AND, BinOp.OR, BinOp.IMPLIES]), children, children
            ).map(lambda t: Binary(*t)),
            children.map(lambda e: Unary(UnOp.NOT, e)),
        )

    return st.recursive(comparisons, extend, max_leaves=6)


class TestPrettyPrinterInverse:
    @given(int_exprs())
    @settings(max_examples=150, deadline=None)
    def test_int_expressions_round_trip(self, e):
        assert parse_expression(pretty(e)) == e

    @given(bool_exprs())
    @settings(max_examples=150, deadline=None)
    def test_bool_expressions_round_trip(self, e):
        assert parse_expression(pretty(e)) == e
