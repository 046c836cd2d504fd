"""Seeded generator of small loop-free, call-free MiniVer programs for the
concrete-soundness and prune-soundness oracles: at most 6 statements and 3
integer variables, type-correct by construction, generated as source text
so the whole front end is exercised."""

from __future__ import annotations

import random

from verdap.lang.parser import parse_program

PARAMS = ["a", "b"]
LOCAL = "c"


def _int_expr(rng: random.Random, names: list[str], depth: int) -> str:
    if depth <= 0 or rng.random() < 0.4:
        if rng.random() < 0.5 and names:
            return rng.choice(names)
        return str(rng.randint(-3, 3))
    op = rng.choice(["+", "-", "*"])
    left = _int_expr(rng, names, depth - 1)
    right = str(rng.randint(-2, 3)) if op == "*" else _int_expr(rng, names, depth - 1)
    return f"({left} {op} {right})"


def _bool_expr(rng: random.Random, names: list[str], depth: int) -> str:
    if depth <= 0 or rng.random() < 0.6:
        op = rng.choice(["<", "<=", ">", ">=", "==", "!="])
        return f"{_int_expr(rng, names, 1)} {op} {_int_expr(rng, names, 1)}"
    kind = rng.choice(["&&", "||", "!"])
    if kind == "!":
        return f"!({_bool_expr(rng, names, depth - 1)})"
    return f"({_bool_expr(rng, names, depth - 1)}) {kind} ({_bool_expr(rng, names, depth - 1)})"


def _statements(rng: random.Random, names: list[str], writable: list[str], budget: int, depth: int) -> list[str]:
    out: list[str] = []
    while budget > 0:
        roll = rng.random()
        if roll < 0.35 and writable:
            target = rng.choice(writable)
            out.append(f"{target} = {_int_expr(rng, names, 2)};")
            budget -= 1
        elif roll < 0.5:
            out.append(f"assume {_bool_expr(rng, names, 1)};")
            budget -= 1
        elif roll < 0.65:
            out.append(f"assert {_bool_expr(rng, names, 1)};")
            budget -= 1
        elif roll < 0.9 and depth > 0 and budget >= 3:
            cond = _bool_expr(rng, names, 1)
            inner = budget - 1
            then_n = max(1, inner // 2)
            then_body = _statements(rng, names, writable, then_n, depth - 1)
            else_body = _statements(rng, names, writable, inner - then_n, depth - 1)
            block = f"if ({cond}) {{ {' '.join(then_body)} }}"
            if else_body:
                block += f" else {{ {' '.join(else_body)} }}"
            out.append(block)
            budget -= 1 + len(then_body) + len(else_body)
        else:
            out.append(f"assert {_bool_expr(rng, names, 1)};")
            budget -= 1
    return out


def generate_program(seed: int) -> tuple[str, list[str]]:
    """One random program; returns (source text, parameter names)."""
    rng = random.Random(seed)
    n_params = rng.choice([1, 2, 2])
    params = PARAMS[:n_params]
    names = list(params)
    lines = ["proc p(" + ", ".join(f"{p}: int" for p in params) + ")", "{"]
    body_budget = rng.randint(3, 6)
    if rng.random() < 0.7 and body_budget > 1:
        lines.append(f"    var {LOCAL}: int = {_int_expr(rng, names, 2)};")
        names.append(LOCAL)
        writable = [LOCAL]
        body_budget -= 1
    else:
        lines.append(f"    var {LOCAL}: int = 0;")
        names.append(LOCAL)
        writable = [LOCAL]
        body_budget -= 1
    for stmt in _statements(rng, names, writable, body_budget, 2):
        lines.append("    " + stmt)
    lines.append("}")
    return "\n".join(lines) + "\n", params


def corpus(count: int = 24, base_seed: int = 20240) -> list[tuple[str, list[str]]]:
    """`count` generated programs, each verified to parse and type-check."""
    out = []
    seed = base_seed
    while len(out) < count:
        source, params = generate_program(seed)
        seed += 1
        try:
            parse_program(source, f"<corpus-{seed}>")
        except Exception:
            continue  # statement budget edge cases; skip and reseed
        out.append((source, params))
    return out
