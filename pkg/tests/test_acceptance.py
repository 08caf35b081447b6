"""The nine acceptance criteria, one test each.

Every test records a PASS/FAIL line (printed directly and collected into the
terminal summary) before asserting, so a failing criterion is still reported
with its measured values.
"""

from __future__ import annotations

import filecmp
import json
import time



from conftest import ACCEPTANCE, GOLDEN
from published import MULTI_CLASS, RESPONSES, SINGLE_CLASS, SINGLE_CLASS_ANSWERS, MULTI_CLASS_ANSWERS
from equivbench.bench import PromptKind, count_function_snippets, render_all, round_half_up, score, validate_design
from equivbench.bench.scoring import CHATBOTS, Row, expected_counts, standard_truth
from equivbench.cli import main
from equivbench.corpus import ALGORITHMS, figures_dir
from equivbench.errors import NoOpportunity
from equivbench.fuzz import corpus as fuzz_corpus, fuzz_manifest
from equivbench.interp import equivalent
from equivbench.perturb import (
    CORRECT, INCORRECT, PerturbationKind, obfuscate, obfuscation_map, perturb, perturb_both,
)
from equivbench.perturb.dataset import VARIANTS
from equivbench.printer import print_program
from equivbench.rewrite import apply_cf, apply_cp, garbage_collect, normalize
from equivbench.soundness import check_soundness

FUZZ_PROGRAMS = 1000

CONTEXTLESS = "Are the following functions semantically equivalent to the first one?"
CONTEXTUAL = (
    "You are a chatbot for comparing the semantics of small Python programs. "
    "I will provide you with multiple implementations of the same Python function. "
    "The first function is the reference version. "
    "The other functions are perturbed with copy propagation, constant folding or a combination of the two. "
    "Tell me whether the functions are semantically equivalent to the reference version or not."
)


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def _annotate(flag: str, name: str, capsys) -> tuple[str, float]:
    t = time.perf_counter()
    code = main(["annotate", flag, str(figures_dir() / f"{name}.py")])
    elapsed = time.perf_counter() - t
    assert code == 0
    return capsys.readouterr().out, elapsed


def test_criterion_1_golden_cp_annotations(capsys):
    out, elapsed = _annotate("--cp", "factorial_cp", capsys)
    golden = (GOLDEN / "factorial_cp.annotations.txt").read_text(encoding="utf-8")
    ok = out == golden and elapsed < 1.0
    record(1, ok, f"8 rows {'identical' if out == golden else 'DIFFER'}, {elapsed:.3f}s")
    assert out == golden
    assert elapsed < 1.0


def test_criterion_2_golden_cf_annotations(capsys):
    out, elapsed = _annotate("--cf", "factorial_cf", capsys)
    golden = (GOLDEN / "factorial_cf.annotations.txt").read_text(encoding="utf-8")
    ok = out == golden and elapsed < 1.0
    record(2, ok, f"9 rows {'identical' if out == golden else 'DIFFER'}, {elapsed:.3f}s")
    assert out == golden
    assert elapsed < 1.0


def test_criterion_3_golden_rewrites(figures):
    checks = {}
    t = time.perf_counter()
    cp_result, cp_trace = apply_cp(figures["factorial_cp"])
    checks["cp trace"] = cp_trace.rules() == ["CP3", "CP4", "CP2", "CP1"]
    checks["cp final"] = print_program(cp_result) == print_program(figures["factorial_cp_final"])
    cf_result, cf_trace = apply_cf(figures["factorial_cf"])
    checks["cf final"] = print_program(cf_result) == print_program(figures["factorial_cf_final"])
    # The last step removes the loop's "tmp = 1", re-established on every iteration.
    checks["cf last step"] = cf_trace.steps[-1].before == "tmp = 1" and cf_trace.steps[-1].after == "ε"
    gc_cp, t1 = garbage_collect(cp_result)
    gc_cf, t2 = garbage_collect(cf_result)
    checks["gc tmp = n"] = [s.before for s in t1] == ["tmp = n"] and "tmp" not in print_program(gc_cp)
    checks["gc tmp = 1"] = [s.before for s in t2] == ["tmp = 1"] and "tmp" not in print_program(gc_cf)
    elapsed = time.perf_counter() - t
    ok = all(checks.values()) and elapsed < 3.0
    failed = [k for k, v in checks.items() if not v]
    record(3, ok, f"cp trace {cp_trace.rules()}, {len(cf_trace)} cf steps, {elapsed:.3f}s"
           + (f"; failed: {failed}" if failed else ""))
    assert not failed
    assert elapsed < 3.0


def _preservation_violations(p, m, seed: int, stats: dict) -> list[str]:
    bad = []
    q, _ = normalize(p)
    if equivalent(p, q, m).equivalent != "yes":
        bad.append("normalize")
    for kind in PerturbationKind:
        try:
            q, _ = perturb(p, kind, seed)
        except NoOpportunity:
            stats["no-opportunity"] = stats.get("no-opportunity", 0) + 1
            continue
        stats["perturbations"] = stats.get("perturbations", 0) + 1
        if equivalent(p, q, m).equivalent != "yes":
            bad.append(kind.value)
    entry2 = None if m.script else obfuscation_map(p, seed)[m.entry]
    if equivalent(p, obfuscate(p, seed), m, entry2=entry2).equivalent != "yes":
        bad.append("obfuscate")
    return bad


def test_criterion_4_semantic_preservation(corpus):
    t = time.perf_counter()
    violations, stats = [], {}
    for algo in corpus:
        assert len(algo.manifest.cases) >= 20
        for seed in range(3):
            for what in _preservation_violations(algo.program, algo.manifest, seed, stats):
                violations.append(f"{algo.name}/{what}/seed {seed}")
    m = fuzz_manifest()
    assert len(m.cases) >= 20
    programs = fuzz_corpus(FUZZ_PROGRAMS, seed=4)
    for i, p in enumerate(programs):
        for what in _preservation_violations(p, m, i, stats):
            violations.append(f"fuzz {i}/{what}")
    elapsed = time.perf_counter() - t
    record(4, not violations,
           f"{len(corpus)} corpus + {len(programs)} fuzzed programs, {stats.get('perturbations', 0)} perturbations "
           f"({stats.get('no-opportunity', 0)} without a site), {len(violations)} violations, {elapsed:.0f}s")
    assert not violations, violations[:10]


def test_criterion_5_round_trip(corpus):
    failures = []
    for algo in corpus:
        ref, m = algo.program, algo.manifest
        variant = perturb_both(ref, 42)
        if equivalent(normalize(ref)[0], normalize(variant)[0], m).equivalent != "yes":
            failures.append(algo.name)
    record(5, not failures, f"{len(corpus)} algorithms, {len(failures)} failures {failures or ''}".rstrip())
    assert not failures


def test_criterion_6_dataset_shape(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["dataset", "--seed", "42", "--out", str(a)]) == 0
    assert main(["dataset", "--seed", "42", "--out", str(b)]) == 0
    capsys.readouterr()
    programs = sorted(a.glob("*/*.py"))
    problems = []
    for name in ALGORITHMS:
        labels = json.loads((a / name / "labels.json").read_text(encoding="utf-8"))["variants"]
        if set(labels) != set(VARIANTS):
            problems.append(f"{name}: variants")
            continue
        yes = [v for v in CORRECT if labels[v]["equivalent"] == "yes"]
        no = [v for v in INCORRECT if labels[v]["equivalent"] == "no" and labels[v]["witness"] is not None]
        if len(yes) != 4 or len(no) != 4:
            problems.append(f"{name}: {len(yes)} yes / {len(no)} no-with-witness")
    cmp = filecmp.dircmp(a, b)

    def identical(d) -> bool:
        if d.left_only or d.right_only or d.diff_files or d.funny_files:
            return False
        _, mismatch, errors = filecmp.cmpfiles(d.left, d.right, d.common_files, shallow=False)
        return not mismatch and not errors and all(identical(s) for s in d.subdirs.values())

    same = identical(cmp)
    ok = len(programs) == 88 and not problems and same
    record(6, ok, f"{len(programs)} programs, label problems {problems or 'none'}, "
                  f"rerun {'byte-identical' if same else 'DIFFERS'}")
    assert len(programs) == 88
    assert not problems
    assert same


def test_criterion_7_prompt_fidelity(dataset_dir, tmp_path):
    key = render_all(dataset_dir, 42, tmp_path)
    files = sorted(tmp_path.glob("*/P?.txt"))
    problems = []
    for f in files:
        kind = PromptKind(f.stem)
        text = f.read_text(encoding="utf-8")
        preamble = text.split("\n\n")[1]
        expected = CONTEXTUAL if kind.contextual else CONTEXTLESS
        if preamble != expected:
            problems.append(f"{f.parent.name}/{f.stem}: preamble")
        n = count_function_snippets(text)
        if n != {"P1": 4, "P2": 4, "P3": 8, "P4": 8}[kind.value]:
            problems.append(f"{f.parent.name}/{f.stem}: {n} snippets")
        if key["prompts"][f"{f.parent.name}/{f.stem}"]["order"][0] != "ref":
            problems.append(f"{f.parent.name}/{f.stem}: reference not first")
    ok = len(files) == 44 and not problems
    record(7, ok, f"{len(files)} prompt files, problems: {problems or 'none'}")
    assert len(files) == 44
    assert not problems


# -- criterion 8 fixtures ------------------------------------------------------

SCALE = 10_000  # answers per class unit; every published cell has two decimals, so hits are integral


def _rows(prompt: str, chatbot: str, variants, pct: float, n: int, algorithm: str = "fixture"):
    hits = round(pct * n / 100)
    assert abs(hits - pct * n / 100) < 1e-6, "cell not representable at this scale"
    rows = []
    for k in range(n):
        v = variants[k % len(variants)]
        truth = "yes" if v in CORRECT else "no"
        wrong = "no" if truth == "yes" else "yes"
        rows.append(Row(algorithm, prompt, chatbot, 1, v, truth if k < hits else wrong))
    return rows


def single_class_fixture(prompt: str, cells) -> list:
    rows = []
    for chatbot, pct in zip(CHATBOTS, cells):
        rows += _rows(prompt, chatbot, ("cp", "cf", "cp_cf"), pct, SCALE)
    return rows


def multi_class_fixture(prompt: str, correct, incorrect) -> list:
    """Class sizes follow one prompt instance: 3 non-reference correct snippets, 4 incorrect ones."""
    rows = []
    for chatbot, c, i in zip(CHATBOTS, correct, incorrect):
        rows += _rows(prompt, chatbot, ("cp", "cf", "cp_cf"), c, 3 * SCALE)
        rows += _rows(prompt, chatbot, INCORRECT, i, 4 * SCALE)
    return rows


def test_criterion_8_scorer_reproduction():
    truth = standard_truth(["fixture"])
    details, ok = [], True

    report = score(single_class_fixture("P1", SINGLE_CLASS["P1"]), truth)
    avg = round_half_up(report.row_average("P1"))
    ok &= avg == 62.34
    details.append(f"single-class #1 average {avg:.2f}")

    mismatches = []
    for prompt, (correct, incorrect, overall) in MULTI_CLASS.items():
        report = score(multi_class_fixture(prompt, correct, incorrect), truth)
        for chatbot, published in zip(CHATBOTS, overall):
            got = round_half_up(report.accuracy(chatbot, prompt, "overall"))
            if abs(got - published) > 0.01 + 1e-9:
                mismatches.append(f"{prompt}/{chatbot}: computed {got:.2f}, published {published:.2f}")
    ok &= not mismatches
    details.append(f"{14 - len(mismatches)}/14 overall cells within 0.01"
                   + (f" (mismatch: {'; '.join(mismatches)})" if mismatches else ""))

    counts = expected_counts(len(ALGORITHMS), len(CHATBOTS))
    grid = [Row(a, k.value, c, n, v, "yes")
            for a in ALGORITHMS for k in PromptKind for c in CHATBOTS for n in range(1, 11)
            for v in k.variants if v != "ref"]
    design = validate_design(grid, ALGORITHMS, CHATBOTS)
    identity = (len(ALGORITHMS) * len(PromptKind) * len(CHATBOTS) * 10 == RESPONSES
                == counts["responses"] == design.responses == design.expected_responses
                and design.complete and design.reading == "non-reference"
                and design.single_class_answers == SINGLE_CLASS_ANSWERS
                and design.multi_class_answers == MULTI_CLASS_ANSWERS)
    ok &= identity
    details.append(f"count identity {design.responses} responses ({design.single_class_answers} + "
                   f"{design.multi_class_answers} answers, {design.reading} reading)")
    record(8, ok, "; ".join(details))
    assert avg == 62.34
    assert identity
    assert not mismatches, mismatches


def test_criterion_9_soundness_oracles(corpus):
    checks = skips = 0
    violations = []
    for algo in corpus:
        m = algo.manifest
        r = check_soundness(algo.program, m.cases, m.fuel, None if m.script else m.entry)
        checks += r.checks
        skips += r.unbound_skips
        violations += [(algo.name, *v) for v in r.violations]
    record(9, not violations, f"{checks} annotation checks over {len(corpus)} algorithms, "
                              f"{len(violations)} violations, {skips} unbound-variable skips")
    assert not violations, violations[:5]
