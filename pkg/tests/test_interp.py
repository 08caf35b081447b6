from __future__ import annotations

import builtins
import contextlib
import copy
import io
import json

import pytest

from equivbench import parse, print_program
from equivbench.errors import ManifestError, ManifestMismatch
from equivbench.interp import UNBOUND, Outcome, equivalent, instrumented_run, run, same_outcome
from equivbench.manifest import Case, TestManifest, build_manifest, load_manifest, tape_manifest, thaw


def test_factorial_outputs(figures):
    assert run(figures["factorial_cp"], Case((), (5,))).stdout == ("120",)
    assert run(figures["factorial_cf"], Case((), (1,))).stdout == ("1",)


@pytest.mark.parametrize("src, status", [
    ("print(1 // 0)", "error:div-by-zero"),
    ("x = [1]\nprint(x[3])", "error:index-out-of-range"),
    ("print(y)", "error:unbound-variable"),
    ("print(1 + 'a')", "error:type-error"),
    ("x = input()", "error:tape-exhausted"),
    ("for i in range(1, 5, 0):\n    pass", "error:value-error"),
    ("def f(n):\n    return f(n + 1)\nprint(f(0))", "error:recursion-depth"),
])
def test_runtime_errors(src, status):
    assert run(parse(src)).status == status


def test_output_before_an_error_is_kept():
    out = run(parse("print(1)\nprint(1 // 0)\nprint(2)"))
    assert out.stdout == ("1",) and out.error_kind == "div-by-zero"


def test_fuel_exhaustion():
    out = run(parse("x = 0\nwhile True:\n    x = x + 1"), fuel=1000)
    assert out.status == "fuel-exhausted"


def test_aliasing_is_modelled():
    out = run(parse("A = [1, 2]\nB = A\nB[0] = 5\nprint(A[0])"))
    assert out.stdout == ("5",)


def test_entry_arguments_are_private_copies():
    p = parse("def f(xs):\n    xs.append(1)\n    return len(xs)")
    case = Case(([0],), ())
    assert run(p, case, entry="f").result == 2
    assert run(p, case, entry="f").result == 2  # the case itself was not mutated
    assert thaw(case.args[0]) == [0]


def test_exact_comparison_is_type_aware():
    assert not same_outcome(Outcome((), 1), Outcome((), 1.0))
    assert not same_outcome(Outcome((), 1), Outcome((), True))
    assert same_outcome(Outcome(("0.30000000000000004",), 0.1 + 0.2), Outcome(("0.3",), 0.3), tolerance=1e-9)


def test_equivalence_verdicts(figures):
    m = tape_manifest(range(0, 11))
    v = equivalent(figures["factorial_cp"], figures["factorial_cp_final"], m)
    assert v.equivalent == "yes" and v.exit_code == 0
    assert equivalent(figures["factorial_cp"], figures["factorial_cp"], m).equivalent == "yes"
    broken = parse(print_program(figures["factorial_cp_final"]).replace("n > 1", "n > 2"))
    v = equivalent(figures["factorial_cp"], broken, m)
    assert v.equivalent == "no" and v.witness is not None and v.exit_code == 1
    a, b = v.outcomes
    assert run(figures["factorial_cp"], v.witness) == a and run(broken, v.witness) == b


def test_inconclusive_on_fuel():
    loop = parse("n = int(input())\nwhile n > 0:\n    n = n + 1")
    m = tape_manifest([1], fuel=500)
    v = equivalent(loop, loop, m)
    assert v.equivalent == "inconclusive" and v.exit_code == 2


def test_arity_mismatch():
    p = parse("def f(a, b):\n    return a + b")
    with pytest.raises(ManifestMismatch):
        equivalent(p, p, TestManifest("f", [Case((1,), ())]))


def test_probes(figures):
    p = figures["factorial_cp"]
    loop = p.body[3]
    log = instrumented_run(p, Case((), (3,)), {(loop.sid, "n"), (loop.sid, "tmp")})
    heads = [r for r in log.records if r[1] == "head"]
    assert len(heads) == 2 * 3  # two probes, three guard evaluations for n = 3
    # records come in (n, tmp) or (tmp, n) pairs per visit; n∼tmp holds at every one
    for a, b in zip(heads[::2], heads[1::2]):
        assert {a[2], b[2]} == {"n", "tmp"} and a[3] == b[3]

    q = figures["factorial_cf"]
    for tape in (0, 1, 4):
        log = instrumented_run(q, Case((), (tape,)), {(2, "m")})
        assert [v for _, point, _, v in log.records if point == "post"] == [1]

    dead = parse("if False:\n    x = 1\nprint(2)")
    assert instrumented_run(dead, Case(), {(1, "x")}).records == []
    assert instrumented_run(parse("print(1)\nx = 1"), Case(), {(0, "x")}).records[0][3] is UNBOUND


def test_manifest_construction(tmp_path):
    m = build_manifest({"entry": "f", "args": [{"ints": [0, 3]}, {"values": [True, False]}]})
    assert len(m.cases) == 8  # a finite domain smaller than the minimum is enumerated, not padded
    config = {"entry": "f", "args": [{"lists": {"lengths": [0, 3], "ints": [0, 9]}}], "min_cases": 20, "seed": 1}
    m = build_manifest(config)
    assert len(m.cases) >= 20 and len(set(m.cases)) == len(m.cases)
    assert build_manifest(config) == m
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"entry": "f", "cases": [{"args": [1]}], "comparison": "exact"}))
    assert load_manifest(path).cases == [Case((1,), ())]
    path.write_text("{not json")
    with pytest.raises(ManifestError):
        load_manifest(path)


def _host_run(source: str, case: Case, entry: str):
    """Execute printed source under the real interpreter: (stdout lines, result)."""
    tape = list(case.tape)
    ns: dict = {}
    buf = io.StringIO()
    real_input = builtins.input
    builtins.input = lambda *a: str(tape.pop(0))
    try:
        with contextlib.redirect_stdout(buf):
            exec(compile(source, "<variant>", "exec"), ns)
            result = ns[entry](*copy.deepcopy([thaw(a) for a in case.args])) if entry != "script" else None
    finally:
        builtins.input = real_input
    return tuple(buf.getvalue().splitlines()), result


def test_host_oracle_agreement(corpus):
    for algo in corpus:
        m = algo.manifest
        source = print_program(algo.program)
        for case in m.cases:
            ours = run(algo.program, case, m.fuel, m.entry)
            assert ours.ok, (algo.name, case, ours)
            stdout, result = _host_run(source, case, m.entry)
            host = Outcome(stdout, result)
            assert same_outcome(ours, host, m.tolerance if m.comparison == "tolerance" else None), (algo.name, case)
