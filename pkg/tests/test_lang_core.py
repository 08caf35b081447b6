from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from equivbench import Program, parse, print_program
from equivbench.errors import InvalidSyntax, RedefinedInScope, UnsupportedConstruct
from equivbench.fuzz import random_program
from equivbench.printer import print_expr
from equivbench.scope import substitute, vars_of
from equivbench.syntax import Assign, ExprStmt, While


def expr(src: str):
    s = parse(src).body[0]
    return s.value


def test_minimal_program():
    p = parse("n = int(input())\nprint(n)")
    assert len(p.body) == 2
    assert isinstance(p.body[0], Assign) and isinstance(p.body[1], ExprStmt)


def test_factorial_shape(figures):
    p = figures["factorial_cp"]
    assert len(p.body) == 5
    loop = p.body[3]
    assert isinstance(loop, While) and len(loop.body) == 3


@pytest.mark.parametrize("src", ["class A: pass", "lambda_ = lambda x: x", "try:\n    x = 1\nexcept E:\n    pass",
                                 "import os", "with f() as g:\n    pass"])
def test_outside_subset(src):
    with pytest.raises(UnsupportedConstruct):
        parse(src)


def test_invalid_python():
    with pytest.raises(InvalidSyntax):
        parse("x = = 1")


def test_final_program_lines(figures):
    assert print_program(figures["factorial_cf_final"]).splitlines() == [
        "n = int(input())", "tmp = 1", "m = 1", "while n > 1:", "    m = m * n", "    n = n - 1", "print(m)",
    ]


def test_empty_program_prints_pass():
    assert print_program(Program(())).strip() == "pass"


def test_parenthesization_is_minimal_but_faithful():
    for src in ["x = (a - b) - c", "x = a - (b - c)", "x = -(a + b) * c", "x = a ** b ** c", "x = (a ** b) ** c",
                "x = a // (b * c)", "x = -2 ** 2", "x = (-2) ** 2"]:
        p = parse(src)
        assert parse(print_program(p)) == p


def test_corpus_round_trip(corpus):
    for algo in corpus:
        text = print_program(algo.program)
        assert parse(text) == algo.program
        assert print_program(parse(text)) == text


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_round_trip_random_programs(seed):
    # Generated trees may hold non-canonical nodes such as -(2); go through text once first.
    p = parse(print_program(random_program(seed)))
    text = print_program(p)
    assert parse(text) == p
    assert print_program(parse(text)) == text


def test_vars_of():
    assert vars_of(expr("x = m * n")) == {"m", "n"}
    assert vars_of(parse("tmp = n - 1").body[0]) == {"tmp", "n"}
    assert vars_of(parse("for i in range(k):\n    s = s + i").body[0]) == {"i", "k", "s"}


def test_substitute():
    assert print_expr(substitute(expr("x = n > 1"), "n", "tmp")) == "tmp > 1"
    s = parse("m = m * n").body[0]
    assert substitute(s, "m", "m") == s
    with pytest.raises(RedefinedInScope):
        substitute(parse("x = 1").body[0], "x", "y")


names = st.sampled_from(["a", "b", "c", "n", "tmp"])


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), names, names)
def test_substitution_properties(seed, x, y):
    """Substituting removes every read of x (when it applies) and is the identity for x == y."""
    p = random_program(seed)
    for s in p.body:
        if not isinstance(s, ExprStmt):
            continue
        out = substitute(s, x, y)
        if x != y:
            assert x not in vars_of(out)
        else:
            assert out == s
        # substituting back with a name absent from the statement is a renaming round trip
        if x != y and y not in vars_of(s):
            assert substitute(out, y, x) == s
