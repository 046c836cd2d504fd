"""Exact satisfiability solver for quantifier-free linear integer arithmetic,
speaking a subset of SMT-LIB v2 on stdin/stdout:

    python -m verdap.liasolver < script.smt2

Accepts `(set-logic ...)`, `(declare-const x Int|Bool)`, `(declare-fun x ()
Int|Bool)`, `(assert ...)`, `(check-sat)`, `(get-model)`. Prints `sat`,
`unsat`, or `unknown` on the first line and, for sat, a `(model
(define-fun ...))` block with `(- N)` negatives.

The decision core is Cooper's quantifier elimination over Presburger
arithmetic: boolean variables are case-split, integer division/modulo by a
nonzero constant is compiled into a fresh Euclidean quotient, and the
variables are eliminated one by one. Goals outside the fragment (nonlinear
multiplication, division by a variable) honestly report `unknown`. Models
are found by an expanding concrete search and validated by evaluation, so a
reported model always satisfies the input.
"""

from __future__ import annotations

import itertools
import sys
from math import gcd

# Linear terms are dicts mapping variable name -> coefficient, with the
# constant under the "" key. Formulas are nested tuples:
#   True | False
#   ("and", (f, ...)) | ("or", (f, ...))
#   ("lt", lin)            lin < 0
#   ("dvd", d, lin)        d divides lin          (d >= 1)
#   ("ndvd", d, lin)       d does not divide lin
#   ("bvar", name) | ("nbvar", name)

Lin = dict

_MAX_BOOL_SPLIT = 16
_MAX_VARS = 16
_MAX_PERIOD = 10_000
_MAX_WORK = 200_000
_MODEL_RADIUS = 40
_MODEL_EVALS = 400_000


class Unsupported(Exception):
    """Input is outside the decidable fragment handled here."""


class _Budget(Exception):
    """Work cap exceeded; report unknown rather than stall."""


# ---------------------------------------------------------------------------
# Linear term algebra
# ---------------------------------------------------------------------------


def lin_const(c: int) -> Lin:
    return {"": c}


def lin_var(name: str) -> Lin:
    return {name: 1, "": 0}


def lin_add(a: Lin, b: Lin) -> Lin:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return _tidy(out)


def lin_scale(a: Lin, k: int) -> Lin:
    return _tidy({key: v * k for key, v in a.items()})


def lin_neg(a: Lin) -> Lin:
    return lin_scale(a, -1)


def lin_subst(a: Lin, var: str, replacement: Lin) -> Lin:
    c = a.get(var, 0)
    if c == 0:
        return a
    rest = {k: v for k, v in a.items() if k != var}
    return lin_add(_tidy(rest), lin_scale(replacement, c))


def _tidy(a: Lin) -> Lin:
    out = {k: v for k, v in a.items() if v != 0 or k == ""}
    out.setdefault("", 0)
    return out


def lin_vars(a: Lin):
    return [k for k in a if k != "" and a[k] != 0]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# Formula helpers
# ---------------------------------------------------------------------------


def f_and(items) -> object:
    flat = []
    for f in items:
        if f is False:
            return False
        if f is True:
            continue
        if isinstance(f, tuple) and f[0] == "and":
            flat.extend(f[1])
        else:
            flat.append(f)
    if not flat:
        return True
    if len(flat) == 1:
        return flat[0]
    return ("and", tuple(flat))


def f_or(items) -> object:
    flat = []
    for f in items:
        if f is True:
            return True
        if f is False:
            continue
        if isinstance(f, tuple) and f[0] == "or":
            flat.extend(f[1])
        else:
            flat.append(f)
    if not flat:
        return False
    if len(flat) == 1:
        return flat[0]
    return ("or", tuple(flat))


def f_lt(lin: Lin) -> object:
    """lin < 0, evaluated immediately when ground."""
    if not lin_vars(lin):
        return lin[""] < 0
    return ("lt", lin)


def f_dvd(d: int, lin: Lin, negated: bool = False) -> object:
    d = abs(d)
    if d == 0:
        raise Unsupported("divisibility by zero")
    if d == 1:
        return not negated
    if not lin_vars(lin):
        holds = lin[""] % d == 0
        return holds != negated
    return ("ndvd" if negated else "dvd", d, lin)


def formula_vars(f, out: set | None = None) -> set:
    if out is None:
        out = set()
    if isinstance(f, tuple):
        if f[0] in ("and", "or"):
            for g in f[1]:
                formula_vars(g, out)
        elif f[0] == "lt":
            out.update(lin_vars(f[1]))
        elif f[0] in ("dvd", "ndvd"):
            out.update(lin_vars(f[2]))
    return out


def subst_formula(f, var: str, replacement: Lin):
    if f is True or f is False:
        return f
    kind = f[0]
    if kind in ("and", "or"):
        combine = f_and if kind == "and" else f_or
        return combine(subst_formula(g, var, replacement) for g in f[1])
    if kind == "lt":
        return f_lt(lin_subst(f[1], var, replacement))
    if kind == "dvd":
        return f_dvd(f[1], lin_subst(f[2], var, replacement))
    if kind == "ndvd":
        return f_dvd(f[1], lin_subst(f[2], var, replacement), negated=True)
    raise Unsupported(f"boolean atom {f!r} in arithmetic core")


# ---------------------------------------------------------------------------
# Cooper's elimination
# ---------------------------------------------------------------------------


class _Cooper:
    def __init__(self):
        self.work = 0

    def sat(self, f) -> bool:
        """Is ∃(all vars). f satisfiable?"""
        self.work += 1
        if self.work > _MAX_WORK:
            raise _Budget
        if f is True:
            return True
        if f is False:
            return False
        variables = sorted(formula_vars(f))
        if len(variables) > _MAX_VARS:
            raise Unsupported(f"{len(variables)} integer variables")
        x = self._pick(f, variables)
        for candidate in self._eliminate(f, x):
            if self.sat(candidate):
                return True
        return False

    def _pick(self, f, variables):
        # Prefer the variable with the smallest coefficient lcm: it keeps
        # the divisibility period D small.
        def cost(v):
            period = 1
            for coeff in self._coeffs(f, v):
                period = _lcm(period, abs(coeff))
            return (period, v)

        return min(variables, key=cost)

    def _coeffs(self, f, var):
        if isinstance(f, tuple):
            if f[0] in ("and", "or"):
                for g in f[1]:
                    yield from self._coeffs(g, var)
            elif f[0] == "lt":
                c = f[1].get(var, 0)
                if c:
                    yield c
            elif f[0] in ("dvd", "ndvd"):
                c = f[2].get(var, 0)
                if c:
                    yield c

    def _eliminate(self, f, x):
        delta = 1
        for coeff in self._coeffs(f, x):
            delta = _lcm(delta, abs(coeff))
        if delta > _MAX_PERIOD:
            raise Unsupported(f"coefficient lcm {delta}")

        unit = self._unitize(f, x, delta)
        unit = f_and([unit, f_dvd(delta, lin_var(x))])

        period = delta
        lowers: list[Lin] = []

        def scan(g):
            nonlocal period
            if not isinstance(g, tuple):
                return
            if g[0] in ("and", "or"):
                for h in g[1]:
                    scan(h)
            elif g[0] == "lt":
                if g[1].get(x, 0) == -1:
                    # -x + r < 0  <=>  r < x : r itself is the bound term
                    lower = {k: v for k, v in g[1].items() if k != x}
                    lowers.append(_tidy(lower))
            elif g[0] in ("dvd", "ndvd"):
                if g[2].get(x, 0) != 0:
                    period = _lcm(period, g[1])

        scan(unit)
        if period > _MAX_PERIOD:
            raise Unsupported(f"divisibility period {period}")

        minus_inf = self._minus_infinity(unit, x)
        for j in range(1, period + 1):
            yield subst_formula(minus_inf, x, lin_const(j))
        for lower in lowers:
            for j in range(1, period + 1):
                yield subst_formula(unit, x, lin_add(lower, lin_const(j)))

    def _unitize(self, f, x, delta):
        """Scale every atom so x's coefficient is +1 or -1 (for `lt`) or +1
        (for divisibility), under the change of variable x' = delta * x."""
        if f is True or f is False:
            return f
        kind = f[0]
        if kind in ("and", "or"):
            combine = f_and if kind == "and" else f_or
            return combine(self._unitize(g, x, delta) for g in f[1])
        if kind == "lt":
            lin = f[1]
            c = lin.get(x, 0)
            if c == 0:
                return f
            scaled = lin_scale(lin, delta // abs(c))
            scaled[x] = 1 if c > 0 else -1
            return f_lt(_tidy(scaled))
        if kind in ("dvd", "ndvd"):
            d, lin = f[1], f[2]
            c = lin.get(x, 0)
            if c == 0:
                return f
            m = delta // abs(c)
            scaled = lin_scale(lin, m)
            if c < 0:
                scaled = lin_neg(scaled)  # d | l  <=>  d | -l
            scaled[x] = 1
            return f_dvd(d * m, _tidy(scaled), negated=(kind == "ndvd"))
        raise Unsupported(f"boolean atom {f!r} in arithmetic core")

    def _minus_infinity(self, f, x):
        if f is True or f is False:
            return f
        kind = f[0]
        if kind in ("and", "or"):
            combine = f_and if kind == "and" else f_or
            return combine(self._minus_infinity(g, x) for g in f[1])
        if kind == "lt":
            c = f[1].get(x, 0)
            if c == 1:
                return True  # x + r < 0 holds as x -> -inf
            if c == -1:
                return False  # r < x fails as x -> -inf
            return f
        return f  # divisibility atoms are periodic; keep them


def lia_sat(f) -> bool:
    return _Cooper().sat(f)


# ---------------------------------------------------------------------------
# SMT-LIB front end
# ---------------------------------------------------------------------------


def parse_sexprs(text: str) -> list:
    tokens: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise Unsupported("unterminated |symbol|")
            tokens.append(text[i + 1 : j])
            i = j + 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
            tokens.append(text[start:i])
    out: list = []
    stack = [out]
    for tok in tokens:
        if tok == "(":
            nested: list = []
            stack[-1].append(nested)
            stack.append(nested)
        elif tok == ")":
            if len(stack) == 1:
                raise Unsupported("unbalanced ')'")
            stack.pop()
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise Unsupported("unbalanced '('")
    return out


class _Script:
    def __init__(self):
        self.sorts: dict[str, str] = {}  # declared name -> "Int" | "Bool"
        self.order: list[str] = []
        self.asserts: list = []
        self.want_model = False


def read_script(forms: list) -> _Script:
    script = _Script()
    for form in forms:
        if not isinstance(form, list) or not form:
            continue
        head = form[0]
        if head in ("declare-const", "declare-fun"):
            name = form[1]
            sort = form[-1]
            if head == "declare-fun" and form[2] != []:
                raise Unsupported("declare-fun with arguments")
            if sort not in ("Int", "Bool"):
                raise Unsupported(f"sort {sort}")
            script.sorts[name] = sort
            script.order.append(name)
        elif head == "assert":
            script.asserts.append(form[1])
        elif head == "get-model":
            script.want_model = True
        elif head in ("set-logic", "set-option", "set-info", "check-sat", "exit", "push", "pop"):
            continue
        else:
            raise Unsupported(f"command {head}")
    return script


class _Translator:
    """SMT terms -> (formula over int atoms + bool literals, side constraints).

    Division and modulo by a nonzero constant introduce a fresh Euclidean
    quotient variable q with 0 <= t - c*q < |c|; the defining constraints
    are conjoined at the top level, which preserves satisfiability in every
    polarity because (q, r) is uniquely determined by t.
    """

    def __init__(self, sorts: dict[str, str]):
        self.sorts = sorts
        self.sides: list = []
        self.quotients: dict[tuple, str] = {}
        self.counter = 0

    def formula(self, sx, neg: bool = False):
        if sx == "true":
            return not neg
        if sx == "false":
            return neg
        if isinstance(sx, str):
            if self.sorts.get(sx) == "Bool":
                return ("nbvar", sx) if neg else ("bvar", sx)
            raise Unsupported(f"boolean term {sx!r}")
        if not sx:
            raise Unsupported("empty term")
        head = sx[0]
        args = sx[1:]
        if head == "not":
            return self.formula(args[0], not neg)
        if head == "and":
            items = [self.formula(a, neg) for a in args]
            return f_or(items) if neg else f_and(items)
        if head == "or":
            items = [self.formula(a, neg) for a in args]
            return f_and(items) if neg else f_or(items)
        if head == "=>":
            # a => b  ==  !a or b   (right-assoc for >2 args; we emit 2)
            if len(args) != 2:
                raise Unsupported("n-ary =>")
            if neg:
                return f_and([self.formula(args[0]), self.formula(args[1], True)])
            return f_or([self.formula(args[0], True), self.formula(args[1])])
        if head in ("<", "<=", ">", ">="):
            a = self.term(args[0])
            b = self.term(args[1])
            diff = lin_add(a, lin_neg(b))  # a - b
            if head == "<":
                lin = diff  # a - b < 0
            elif head == "<=":
                lin = lin_add(diff, lin_const(-1))  # a - b - 1 < 0
            elif head == ">":
                lin = lin_neg(diff)  # b - a < 0
            else:
                lin = lin_add(lin_neg(diff), lin_const(-1))
            if neg:
                #  not (l < 0)  <=>  -l - 1 < 0
                lin = lin_add(lin_neg(lin), lin_const(-1))
            return f_lt(lin)
        if head in ("=", "distinct"):
            a = self.term(args[0])
            b = self.term(args[1])
            diff = lin_add(a, lin_neg(b))
            equal = (head == "=") != neg
            le = f_lt(lin_add(diff, lin_const(-1)))  # a - b <= 0
            ge = f_lt(lin_add(lin_neg(diff), lin_const(-1)))  # a - b >= 0
            if equal:
                return f_and([le, ge])
            return f_or([f_lt(diff), f_lt(lin_neg(diff))])
        raise Unsupported(f"operator {head}")

    def term(self, sx) -> Lin:
        if isinstance(sx, str):
            try:
                return lin_const(int(sx))
            except ValueError:
                pass
            if self.sorts.get(sx) == "Int":
                return lin_var(sx)
            raise Unsupported(f"term {sx!r}")
        if not sx:
            raise Unsupported("empty term")
        head = sx[0]
        args = [self.term(a) for a in sx[1:]]
        if head == "+":
            out = lin_const(0)
            for a in args:
                out = lin_add(out, a)
            return out
        if head == "-":
            if len(args) == 1:
                return lin_neg(args[0])
            out = args[0]
            for a in args[1:]:
                out = lin_add(out, lin_neg(a))
            return out
        if head == "*":
            out = lin_const(1)
            for a in args:
                out = self._mul(out, a)
            return out
        if head in ("div", "mod"):
            if len(args) != 2:
                raise Unsupported("n-ary div/mod")
            t, c = args
            if lin_vars(c) or c[""] == 0:
                raise Unsupported("division by a non-constant")
            q = self._quotient(t, c[""])
            if head == "div":
                return lin_var(q)
            return lin_add(t, lin_scale(lin_var(q), -c[""]))  # t - c*q
        raise Unsupported(f"operator {head}")

    def _mul(self, a: Lin, b: Lin) -> Lin:
        if not lin_vars(a):
            return lin_scale(b, a[""])
        if not lin_vars(b):
            return lin_scale(a, b[""])
        raise Unsupported("nonlinear multiplication")

    def _quotient(self, t: Lin, c: int) -> str:
        key = (tuple(sorted(t.items())), c)
        if key in self.quotients:
            return self.quotients[key]
        name = f"q!{self.counter}"
        self.counter += 1
        self.quotients[key] = name
        self.sorts[name] = "Int"
        remainder = lin_add(t, lin_scale(lin_var(name), -c))  # t - c*q
        self.sides.append(f_lt(lin_add(lin_neg(remainder), lin_const(-1))))  # r >= 0
        self.sides.append(f_lt(lin_add(remainder, lin_const(-abs(c)))))  # r < |c|
        return name


def _split_bools(f, assignment: dict[str, bool]):
    if f is True or f is False:
        return f
    kind = f[0]
    if kind in ("and", "or"):
        combine = f_and if kind == "and" else f_or
        return combine(_split_bools(g, assignment) for g in f[1])
    if kind == "bvar":
        return assignment[f[1]]
    if kind == "nbvar":
        return not assignment[f[1]]
    return f


def _bool_vars(f, out: set | None = None) -> set:
    if out is None:
        out = set()
    if isinstance(f, tuple):
        if f[0] in ("and", "or"):
            for g in f[1]:
                _bool_vars(g, out)
        elif f[0] in ("bvar", "nbvar"):
            out.add(f[1])
    return out


def decide(script: _Script) -> bool:
    """True iff the conjunction of assertions is satisfiable.

    Raises Unsupported/_Budget when outside the fragment or over budget.
    """
    translator = _Translator(dict(script.sorts))
    parts = [translator.formula(a) for a in script.asserts]
    f = f_and(parts + translator.sides)
    bools = sorted(_bool_vars(f))
    if len(bools) > _MAX_BOOL_SPLIT:
        raise Unsupported(f"{len(bools)} boolean variables")
    for mask in range(1 << len(bools)):
        assignment = {b: bool(mask >> i & 1) for i, b in enumerate(bools)}
        if lia_sat(_split_bools(f, assignment)):
            return True
    return False


# ---------------------------------------------------------------------------
# Model search (concrete, validated)
# ---------------------------------------------------------------------------


def _eval_term(sx, env: dict):
    if isinstance(sx, str):
        if sx == "true":
            return True
        if sx == "false":
            return False
        if sx in env:
            return env[sx]
        return int(sx)
    head, args = sx[0], [_eval_term(a, env) for a in sx[1:]]
    if head == "not":
        return not args[0]
    if head == "and":
        return all(args)
    if head == "or":
        return any(args)
    if head == "=>":
        return (not args[0]) or args[1]
    if head == "+":
        return sum(args)
    if head == "-":
        if len(args) == 1:
            return -args[0]
        out = args[0]
        for a in args[1:]:
            out -= a
        return out
    if head == "*":
        out = 1
        for a in args:
            out *= a
        return out
    if head == "div":
        a, b = args
        if b == 0:
            raise ZeroDivisionError
        return a // b if b > 0 else -(a // -b)
    if head == "mod":
        a, b = args
        if b == 0:
            raise ZeroDivisionError
        q = a // b if b > 0 else -(a // -b)
        return a - b * q
    if head == "<":
        return args[0] < args[1]
    if head == "<=":
        return args[0] <= args[1]
    if head == ">":
        return args[0] > args[1]
    if head == ">=":
        return args[0] >= args[1]
    if head == "=":
        return args[0] == args[1]
    if head == "distinct":
        return args[0] != args[1]
    raise Unsupported(f"operator {head}")


def _holds(asserts: list, env: dict) -> bool:
    try:
        return all(_eval_term(a, env) is True for a in asserts)
    except (ZeroDivisionError, ValueError):
        return False


def search_model(script: _Script) -> dict | None:
    """Expanding concrete search for a witness of a known-sat script."""
    int_vars = [n for n in script.order if script.sorts[n] == "Int"]
    bool_vars = [n for n in script.order if script.sorts[n] == "Bool"]
    evals = 0
    for radius in range(_MODEL_RADIUS + 1):
        for ints in _shell(len(int_vars), radius):
            for mask in range(1 << len(bool_vars)):
                evals += 1
                if evals > _MODEL_EVALS:
                    return None
                env = dict(zip(int_vars, ints))
                env.update(
                    {b: bool(mask >> i & 1) for i, b in enumerate(bool_vars)}
                )
                if _holds(script.asserts, env):
                    return env
        if not int_vars:
            break
    return None


def _shell(n: int, radius: int):
    """Tuples in [-radius..radius]^n with max-norm exactly `radius`."""
    if n == 0:
        if radius == 0:
            yield ()
        return
    for values in itertools.product(range(-radius, radius + 1), repeat=n):
        if radius == 0 or max(abs(v) for v in values) == radius:
            yield values


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def run(text: str) -> str:
    try:
        script = read_script(parse_sexprs(text))
        satisfiable = decide(script)
    except (Unsupported, _Budget, ValueError, IndexError, KeyError, TypeError):
        return "unknown\n"
    if not satisfiable:
        return "unsat\n"
    model = search_model(script)
    if model is None:
        # Provably sat, but no small witness found: stay conservative
        # rather than report a model we cannot exhibit.
        return "unknown\n"
    out = ["sat"]
    if script.want_model:
        parts = []
        for name in script.order:
            value = model[name]
            if script.sorts[name] == "Bool":
                rendered = "true" if value else "false"
                parts.append(f"  (define-fun {name} () Bool {rendered})")
            else:
                rendered = str(value) if value >= 0 else f"(- {-value})"
                parts.append(f"  (define-fun {name} () Int {rendered})")
        out.append("(model")
        out.extend(parts)
        out.append(")")
    return "\n".join(out) + "\n"


def main() -> int:
    sys.stdout.write(run(sys.stdin.read()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
