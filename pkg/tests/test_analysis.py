"""Static analyses: modified variables, free variables, first locations.

The modified-variables oracle is concrete-execution differencing: run the
body on every small-domain input and record which variables actually
changed; the static set must contain every changed one.
"""

import itertools

from oracle import Finished, run_procedure

from verdap.lang import (
    free_vars,
    IntLit,
    loc_of,
    LogicVar,
    modified_vars,
    parse_program,
    Sort,
    Unary,
    UnOp,
)


def body_of(source: str, proc: str = "p"):
    tu = parse_program(source, "<analysis>")
    return tu, tu.procedure(proc)


class TestModifiedVars:
    def test_single_assignment(self):
        _, proc = body_of("proc p(x: int) { var y: int = 0; y = y + x; }")
        assert modified_vars(proc.body) == {"y"}

    def test_union_over_branches(self):
        _, proc = body_of(
            "proc p(b: bool) { var y: int = 0; var z: int = 0;"
            " if (b) { y = 0; } else { z = 1; } }"
        )
        assert modified_vars(proc.body[2:]) == {"y", "z"}

    def test_call_result_counts(self):
        tu, proc = body_of(
            "proc f(x: int): int { result = x; }"
            " proc p(x: int) { var r: int = 0; r = f(x); }",
            proc="p",
        )
        assert modified_vars(proc.body[1:]) == {"r"}

    def test_while_body_is_included(self):
        _, proc = body_of(
            "proc p(n: int) { var i: int = 0;"
            " while (i < n) invariant i >= 0; { i = i + 1; } }"
        )
        assert modified_vars(proc.body) == {"i"}

    def test_differencing_oracle_on_small_domain(self):
        """Concrete soundness of the static set: a variable outside
        modified_vars(body) never changes on any input in {-2..2}^n."""
        programs = [
            "proc f(x: int): int { result = x + 1; }"
            " proc p(a: int, b: int) { var r: int = 0;"
            "   if (a > b) { r = f(a); } else { r = b; } }",
            "proc p(a: int) { var u: int = a; var v: int = 0;"
            "   if (a >= 0) { v = u * 2; } }",
        ]
        for source in programs:
            tu = parse_program(source, "<diff>")
            proc = tu.procedure("p")
            static = modified_vars(proc.body)
            params = [name for name, _ in proc.params]
            for values in itertools.product(range(-2, 3), repeat=len(params)):
                inputs = dict(zip(params, values))
                outcome = run_procedure(tu, proc, inputs)
                if not isinstance(outcome, Finished):
                    continue
                for name, value in outcome.env.items():
                    if name in inputs and value == inputs[name]:
                        continue
                    assert name in static, (name, source)


class TestFreeVars:
    def test_logic_var_renders_with_index(self):
        assert free_vars(Unary(UnOp.NEG, LogicVar("x", 0, Sort.INT))) == {"x0"}

    def test_literal_has_none(self):
        assert free_vars(IntLit(5)) == frozenset()

    def test_syntactic_collection(self):
        from verdap.lang import parse_expression

        assert free_vars(parse_expression("a + 1 > b")) == {"a", "b"}


class TestLocOf:
    def test_first_statement(self):
        _, proc = body_of("proc p() {\n  assume true;\n  assert true;\n}")
        assert loc_of(proc.body).line == 2

    def test_empty_program(self):
        assert loc_of(()) is None

    def test_head_if(self):
        _, proc = body_of("proc p(b: bool) {\n\n  if (b) { } else { }\n}")
        assert loc_of(proc.body).line == 3
