from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from equivbench import parse, print_program
from equivbench.errors import NoKillableMutant, NoOpportunity
from equivbench.fuzz import fuzz_manifest, random_program
from equivbench.interp import equivalent, run, same_outcome
from equivbench.manifest import tape_manifest
from equivbench.perturb import (
    CORRECT, INCORRECT, VARIANTS, PerturbationKind, build_variant_set, deobfuscate, inject_bug, load_variant_set,
    obfuscate, obfuscation_map, perturb, perturb_both, perturb_cf, perturb_cp,
)
from equivbench.perturb.bugs import KINDS
from equivbench.rewrite import normalize


def test_every_kind_preserves_corpus_semantics(corpus):
    for algo in corpus:
        for kind in PerturbationKind:
            q, log = perturb(algo.program, kind, 11)
            assert 2 <= len(log) <= 12
            assert print_program(q) != print_program(algo.program)
            assert equivalent(algo.program, q, algo.manifest).equivalent == "yes", (algo.name, kind, log)
            assert equivalent(normalize(algo.program)[0], normalize(q)[0], algo.manifest).equivalent == "yes"


def test_inverse_copy_propagation_on_the_six_line_factorial(figures):
    six = normalize(figures["factorial_cp"])[0]
    m = tape_manifest(range(0, 11))
    found_tmp = False
    for seed in range(10):
        q = perturb_cp(six, seed)
        assert equivalent(six, q, m).equivalent == "yes"
        found_tmp |= "t1 = n" in print_program(q)
    assert found_tmp


def test_inverse_constant_folding(figures):
    m = tape_manifest(range(0, 11))
    six = normalize(figures["factorial_cf"])[0]
    for seed in range(10):
        assert equivalent(six, perturb_cf(six, seed), m).equivalent == "yes"
    q = perturb_cf(parse("print(5)"), 0)
    assert run(q).stdout == ("5",) and print_program(q) != "print(5)\n"


def test_no_opportunity():
    with pytest.raises(NoOpportunity):
        perturb_cp(parse("print(1)"), 0)
    with pytest.raises(NoOpportunity):
        perturb_cf(parse("x = input()\nprint(x)"), 0)


def test_determinism(corpus):
    algo = corpus[3]
    assert perturb_both(algo.program, 5) == perturb_both(algo.program, 5)
    assert obfuscate(algo.program, 5) == obfuscate(algo.program, 5)


def test_obfuscation_is_a_bijection(corpus):
    for algo in corpus:
        mapping = obfuscation_map(algo.program)
        assert len(set(mapping.values())) == len(mapping)
        assert deobfuscate(obfuscate(algo.program), mapping) == algo.program


def test_obfuscation_labels():
    p = parse("def count(xs):\n    x = 0\n    for item in xs:\n        x = x + item\n    return x")
    assert print_program(obfuscate(p)) == "def f1(a):\n    b = 0\n    for c in a:\n        b = b + c\n    return b\n"


def test_bug_injection_kills(corpus):
    for algo in corpus:
        bugged, bug = inject_bug(algo.program, 3, algo.manifest)
        assert bug.kind in KINDS
        v = equivalent(algo.program, bugged, algo.manifest)
        assert v.equivalent == "no"
        # the stored witness reproduces the difference
        tol = algo.manifest.tolerance if algo.manifest.comparison == "tolerance" else None
        a = run(algo.program, bug.witness, algo.manifest.fuel, algo.manifest.entry)
        b = run(bugged, bug.witness, algo.manifest.fuel, algo.manifest.entry)
        assert not same_outcome(a, b, tol)


def test_only_dead_sites_means_no_killable_mutant():
    p = parse("x = 1\ny = x + 2\nprint('done')")
    with pytest.raises(NoKillableMutant):
        inject_bug(p, 0, tape_manifest([1, 2]))
    # a bug at a live site is found
    p = parse("n = int(input())\nprint(n + 1)")
    bugged, bug = inject_bug(p, 0, tape_manifest(range(5)))
    assert bug.witness is not None


def test_variant_set(corpus, dataset_dir):
    algo = next(a for a in corpus if a.name == "fibonacci")
    vs = build_variant_set(algo, 42)
    vs.check()
    assert set(vs.programs) == set(VARIANTS)
    assert all(vs.labels[v].equivalent == "yes" for v in CORRECT)
    assert all(vs.labels[v].equivalent == "no" and vs.labels[v].witness for v in INCORRECT)
    loaded = load_variant_set(dataset_dir, "fibonacci")
    assert all(print_program(loaded[v]) == print_program(vs[v]) for v in VARIANTS)
    labels = json.loads((dataset_dir / "fibonacci" / "labels.json").read_text())
    assert labels["variants"]["bug_cp"]["bug"]["kind"] in KINDS
    assert (dataset_dir / "fibonacci" / "trace.txt").read_text().startswith("ref: unchanged")


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.sampled_from(list(PerturbationKind)))
def test_perturbations_preserve_random_programs(seed, kind):
    p = random_program(seed)
    try:
        q, log = perturb(p, kind, seed)
    except NoOpportunity:
        return
    assert equivalent(p, q, fuzz_manifest()).equivalent == "yes", log
