from __future__ import annotations

from itertools import product

from hypothesis import given, settings, strategies as st

from equivbench import parse
from equivbench.cp_analysis import (
    EMPTY, copyset, dump_cp, infer_cp, infer_cp_history, intersect, judge_cp, remove_var, st_closure,
)
from equivbench.fuzz import random_program
from conftest import GOLDEN


def stmt(src: str):
    return parse(src).body[0]


def test_closure():
    assert st_closure([("x", "y"), ("y", "z")]) == copyset(("x", "y"), ("y", "z"), ("x", "z"))
    assert ("z", "x") in st_closure([("x", "y"), ("y", "z")])
    assert st_closure([]) == EMPTY
    assert st_closure([("n", "tmp")]).classes() == [["n", "tmp"]]


def test_remove_var():
    assert remove_var(copyset(("n", "tmp")), "tmp") == EMPTY
    assert remove_var(copyset(("x", "y"), ("y", "z")), "y") == copyset(("x", "z"))
    assert remove_var(EMPTY, "x") == EMPTY


def test_intersect():
    nt = copyset(("n", "tmp"))
    assert intersect(nt, EMPTY) == EMPTY
    assert intersect(nt, nt) == nt
    abc = copyset(("a", "b"), ("b", "c"))
    assert intersect(abc, copyset(("a", "b"), ("c", "d"))) == copyset(("a", "b"))


def test_judge_examples():
    nt = copyset(("n", "tmp"))
    assert judge_cp(EMPTY, stmt("tmp = n")) == nt
    assert judge_cp(nt, stmt("m = m * n")) == nt
    assert judge_cp(nt, stmt("tmp = n - 1")) == EMPTY


def test_mutation_kills_copies():
    ab = copyset(("a", "b"))
    assert judge_cp(ab, stmt("b[0] = 5")) == EMPTY
    assert judge_cp(ab, stmt("a.append(1)")) == EMPTY
    assert judge_cp(ab, stmt("print(len(a))")) == ab


def test_golden_factorial(figures):
    assert dump_cp(figures["factorial_cp"]) == (GOLDEN / "factorial_cp.annotations.txt").read_text(encoding="utf-8")


def test_factorial_rounds(figures):
    history = infer_cp_history(figures["factorial_cp"], check_monotone=True)
    # three approximants plus the confirming round that changes nothing
    assert len(history) <= 4
    loop = figures["factorial_cp"].body[3]
    final = history[-1]
    assert final.pre(loop.sid) == final.post(loop.sid) == copyset(("n", "tmp"))


def test_chain_of_copies():
    p = parse("a = b\nc = a")
    amap = infer_cp(p)
    assert amap.post(1) == copyset(("a", "b"), ("a", "c"), ("b", "c"))


def test_no_copies_all_empty():
    p = parse("x = 1\ny = x + 2\nprint(y)")
    amap = infer_cp(p)
    assert all(amap.pre(s.sid) == EMPTY and amap.post(s.sid) == EMPTY for s in p.statements())


def test_function_bodies_start_empty():
    p = parse("a = b\ndef f(x):\n    y = x\n    return y\nprint(f(a))")
    amap = infer_cp(p)
    fn = p.body[1]
    assert amap.pre(fn.body[0].sid) == EMPTY
    assert amap.post(fn.body[0].sid) == copyset(("x", "y"))


VARS = ["a", "b", "c", "d"]
pairs = st.lists(st.tuples(st.sampled_from(VARS), st.sampled_from(VARS)).filter(lambda p: p[0] != p[1]), max_size=5)


@given(pairs, pairs)
def test_intersection_laws(p, q):
    P, Q = st_closure(p), st_closure(q)
    assert intersect(P, Q) == intersect(Q, P)
    assert intersect(P, P) == P
    assert intersect(P, Q) <= P
    # the intersection of two closed sets is closed
    assert st_closure(intersect(P, Q)) == intersect(P, Q)


@given(pairs)
def test_closure_is_idempotent_and_symmetric(p):
    P = st_closure(p)
    assert st_closure(P) == P
    for x, y in product(VARS, VARS):
        assert ((x, y) in P) == ((y, x) in P)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_inference_is_monotone_and_deterministic(seed):
    p = random_program(seed)
    history = infer_cp_history(p, check_monotone=True)  # raises if an annotation shrinks
    assert infer_cp(p).entries == history[-1].entries
