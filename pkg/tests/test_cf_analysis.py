from __future__ import annotations

from hypothesis import given, settings, strategies as st

from equivbench import parse
from equivbench.cf_analysis import (
    EMPTY, ERR, TOP, TOP_INT, AConst, abstract_eval, constant_bindings, dump_cf, infer_cf, infer_cf_history,
    join_memory, join_value, judge_cf, memory,
)
from equivbench.fuzz import random_program
from conftest import GOLDEN

C1 = memory(n=TOP, tmp=1, m=1)
C2 = memory(n=TOP, tmp=2, m=1)
C3 = memory(n=TOP, tmp=2, m=TOP)
C4 = memory(n=TOP, tmp=1, m=TOP)


def expr(src: str):
    return parse(f"_ = {src}").body[0].value


def stmt(src: str):
    return parse(src).body[0]


def test_join_value_examples():
    assert join_value(AConst(1), AConst(1)) == AConst(1)
    assert join_value(AConst(1), AConst(2)) in (TOP, TOP_INT)
    assert join_value(TOP, ERR) is ERR
    # int and float constants with equal value are different constants
    assert join_value(AConst(1), AConst(1.0)) != AConst(1)


def test_join_memory_examples():
    assert join_memory(memory(tmp=1), memory(tmp=2)).as_dict() == {"tmp": TOP_INT}
    assert join_memory(memory(n=TOP), EMPTY) == memory(n=TOP)
    assert join_memory(C1, C4) == C4


def test_abstract_eval_examples():
    c = memory(n=TOP, tmp=1)
    assert abstract_eval(expr("2 * tmp - 1"), c) == AConst(1)
    assert abstract_eval(expr("n > tmp"), c) in (TOP, TOP_INT)
    assert abstract_eval(expr("1 // 0"), EMPTY) is ERR
    assert abstract_eval(expr("x + 1"), EMPTY) is ERR  # unbound


def test_judge_examples():
    assert judge_cf(memory(n=TOP, tmp=1), stmt("m = 2 * tmp - 1")) == C1
    assert judge_cf(C3, stmt("tmp = tmp - 1")) == C4
    post = judge_cf(memory(n=TOP), parse("if False:\n    x = 1\nelse:\n    x = 2").body[0])
    assert constant_bindings(post) == {"x": 2}


def test_golden_factorial(figures):
    p = figures["factorial_cf"]
    assert dump_cf(p) == (GOLDEN / "factorial_cf.annotations.txt").read_text(encoding="utf-8")
    amap = infer_cf(p)
    loop = p.body[3]
    r = lambda sid, which: getattr(amap, which)(sid).render()  # ⊤ kinds are not part of the table
    # the loop row shows the head invariant (the entry memory is C1)
    assert (r(loop.sid, "head"), r(loop.sid, "post")) == (C4.render(), C4.render())
    assert r(loop.sid, "pre") == C1.render()
    body = loop.body
    assert (r(body[0].sid, "pre"), r(body[0].sid, "post")) == (C4.render(), C3.render())
    assert (r(body[1].sid, "pre"), r(body[1].sid, "post")) == (C3.render(), C3.render())
    assert (r(p.body[4].sid, "pre"), r(p.body[4].sid, "post")) == (C4.render(), C4.render())


def test_two_assignments():
    p = parse("x = 3\ny = x + 4")
    assert constant_bindings(infer_cf(p).post(1)) == {"x": 3, "y": 7}


def test_input_is_top_everywhere_after():
    p = parse("n = int(input())\nx = n + 1\nwhile x > 0:\n    x = x - 1\nprint(n)")
    amap = infer_cf(p)
    for s in p.statements()[1:]:
        assert amap.post(s.sid).get("n") in (TOP, TOP_INT)


values = st.one_of(st.integers(-3, 3).map(AConst), st.sampled_from([TOP, TOP_INT, ERR]),
                   st.sampled_from([AConst(1.0), AConst("s")]))


@given(values, values, values)
def test_join_value_laws(a, b, c):
    assert join_value(a, b) == join_value(b, a)
    assert join_value(a, a) == a
    assert join_value(join_value(a, b), c) == join_value(a, join_value(b, c))


memories = st.dictionaries(st.sampled_from(["a", "b", "c"]), values, max_size=3).map(lambda d: memory(**d))


@given(memories, memories, memories)
def test_join_memory_laws(x, y, z):
    assert join_memory(x, y) == join_memory(y, x)
    assert join_memory(x, x) == x
    assert join_memory(join_memory(x, y), z) == join_memory(x, join_memory(y, z))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_inference_ascends_and_is_deterministic(seed):
    p = random_program(seed)
    history = infer_cf_history(p, check_monotone=True)
    assert infer_cf(p).entries == history[-1].entries


def test_err_may_widen_to_top():
    # round 1 sees w1 = 0 and the division faults; later rounds see w1 = ⊤
    p = parse("w = 0\nwhile w < 3:\n    a = 3 % w\n    w = w + 1")
    infer_cf_history(p, check_monotone=True)


@settings(max_examples=60, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20), st.sampled_from(["+", "-", "*", "//", "%", "<", "==", "**"]))
def test_abstract_eval_agrees_with_interpreter(a, b, op):
    from equivbench.interp import run

    e = f"({a}) {op} ({b})"
    out = run(parse(f"print({e})"))
    v = abstract_eval(expr(e), EMPTY)
    if out.ok:
        assert isinstance(v, AConst) and str(v.value) == out.stdout[0]
    else:
        assert v is ERR
