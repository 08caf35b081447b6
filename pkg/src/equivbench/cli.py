"""Command-line interface: ``equivbench <verb> …``.

Exit codes: 0 success, 1 domain failure (non-equivalence, no perturbation
site, no killable mutant, log/dataset mismatch), 2 usage or I/O error
(including source files outside the supported subset).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .cf_analysis import dump_cf
from .cp_analysis import dump_cp
from .errors import (
    EquivBenchError, LogTruthMismatch, ManifestError, NoKillableMutant, NoOpportunity, ParseError,
)
from .fsutil import write_atomic
from .parser import parse_file
from .printer import print_program

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class _Fail(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(Path(out), text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return parse_file(path)
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from exc
    except ParseError as exc:
        raise _Fail(EXIT_USAGE, f"{path}:{exc}") from exc


def cmd_parse(args) -> int:
    _emit(print_program(_load(args.file)), args.output)
    return EXIT_OK


def cmd_annotate(args) -> int:
    p = _load(args.file)
    _emit(dump_cp(p) if args.cp else dump_cf(p), args.output)
    return EXIT_OK


def cmd_optimize(args) -> int:
    from .rewrite import apply_cf, apply_cp, garbage_collect, normalize

    p = _load(args.file)
    phase = {"cp": apply_cp, "cf": apply_cf, "gc": garbage_collect, "all": normalize}[args.phase]
    result, trace = phase(p)
    if args.trace:
        write_atomic(Path(args.trace), trace.text())
    _emit(print_program(result), args.output)
    return EXIT_OK


def _manifest(path: str):
    from .manifest import load_manifest

    try:
        return load_manifest(path)
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from exc
    except ManifestError as exc:
        raise _Fail(EXIT_USAGE, f"{path}: {exc}") from exc


def cmd_verify(args) -> int:
    from .interp import equivalent

    ref, variant, m = _load(args.ref), _load(args.variant), _manifest(args.manifest)
    if args.entry:
        m = replace(m, entry=args.entry)
    try:
        verdict = equivalent(ref, variant, m, entry2=args.entry2)
    except ManifestError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from exc
    print(f"equivalent: {verdict.equivalent} ({verdict.cases_run} cases)")
    if verdict.witness is not None:
        a, b = verdict.outcomes
        print(f"witness: {verdict.witness}")
        print(f"  ref:     {a}")
        print(f"  variant: {b}")
    return verdict.exit_code


def cmd_perturb(args) -> int:
    from .perturb import PerturbationKind, inject_bug, obfuscate, perturb

    p = _load(args.file)
    log: list[str] = []
    if args.kind == "obfuscate":
        result = obfuscate(p, args.seed)
    elif args.kind == "bug":
        if not args.manifest:
            raise _Fail(EXIT_USAGE, "--kind bug needs --manifest")
        result, bug = inject_bug(p, args.seed, _manifest(args.manifest))
        log.append(f"{bug.kind} at stmt {bug.site[0]}: «{bug.before}» => «{bug.after}» (witness {bug.witness})")
    else:
        result, log = perturb(p, PerturbationKind(args.kind), args.seed)
    for line in log:
        print(f"# {line}", file=sys.stderr)
    _emit(print_program(result), args.output)
    return EXIT_OK


def cmd_dataset(args) -> int:
    from .perturb import build_dataset

    summary = build_dataset(args.corpus, args.seed, args.out)
    failed = {k: v["status"] for k, v in summary["algorithms"].items() if v["status"] != "ok"}
    print(f"{summary['programs']} programs written to {args.out}")
    for name, status in failed.items():
        print(f"{name}: {status}", file=sys.stderr)
    return EXIT_DOMAIN if failed else EXIT_OK


def cmd_prompts(args) -> int:
    from .bench import render_all

    key = render_all(args.dataset, args.seed, args.out)
    print(f"{len(key['prompts'])} prompts written to {args.out}")
    return EXIT_OK


def cmd_score(args) -> int:
    from .bench.scoring import load_truth, read_log, score, validate_design

    try:
        rows = read_log(args.log)
    except ValueError as exc:
        raise _Fail(EXIT_USAGE, f"{args.log}: {exc}") from exc
    truth = load_truth(args.dataset)
    report = score(rows, truth)
    design = validate_design(rows, truth, {r.chatbot for r in rows}, args.rounds)
    text = report.to_text()
    text += (f"\nresponses: {design.responses} of {design.expected_responses} expected; "
             f"answers: {design.single_class_answers} single-class + {design.multi_class_answers} multi-class; "
             f"reading: {design.reading or 'incomplete'}\n")
    _emit(text, args.output)
    if args.json:
        doc = report.to_json()
        doc["design"] = {"responses": design.responses, "expected_responses": design.expected_responses,
                         "single_class_answers": design.single_class_answers,
                         "multi_class_answers": design.multi_class_answers, "reading": design.reading}
        write_atomic(Path(args.json), json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="equivbench", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, fn, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(func=fn)
        return sp

    def output(sp):
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")

    sp = verb("parse", cmd_parse, "parse a program and print its canonical form")
    sp.add_argument("file")
    output(sp)

    sp = verb("annotate", cmd_annotate, "dump the copy-propagation or constant-folding annotation table")
    sp.add_argument("file")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--cp", action="store_true", help="copy pairs before/after each statement")
    which.add_argument("--cf", action="store_true", help="abstract memories before/after each statement")
    output(sp)

    sp = verb("optimize", cmd_optimize, "rewrite a program with copy propagation, constant folding and/or dead-copy removal")
    sp.add_argument("file")
    sp.add_argument("--phase", choices=("cp", "cf", "gc", "all"), default="all",
                    help="which rewrite phase to run; 'all' alternates them to a fixpoint (default)")
    sp.add_argument("--trace", help="write the step-by-step rewrite trace to this file")
    output(sp)

    sp = verb("verify", cmd_verify, "decide equivalence by running both programs on a test manifest (exit 0 yes / 1 no / 2 inconclusive)")
    sp.add_argument("ref")
    sp.add_argument("variant")
    sp.add_argument("--manifest", required=True, help="JSON test manifest")
    sp.add_argument("--entry", help="entry function name in the reference (overrides the manifest)")
    sp.add_argument("--entry2", help="entry function name in the variant, if it differs from the reference's")

    sp = verb("perturb", cmd_perturb, "produce a semantically equivalent (or, with --kind bug, broken) variant")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=("cp", "cf", "cp_cf", "obfuscate", "bug"), required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--manifest", help="test manifest (required for --kind bug)")
    output(sp)

    sp = verb("dataset", cmd_dataset, "generate the 8-variant dataset for every corpus algorithm")
    sp.add_argument("--corpus", help="corpus directory (default: the bundled corpus)")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--out", required=True)

    sp = verb("prompts", cmd_prompts, "render the four prompts for every algorithm of a dataset")
    sp.add_argument("--dataset", required=True)
    sp.add_argument("--seed", type=int, default=42, help="seed for snippet order")
    sp.add_argument("--out", required=True)

    sp = verb("score", cmd_score, "score a runs.csv response log against dataset labels")
    sp.add_argument("--log", required=True, help="CSV with columns algorithm,prompt,chatbot,round,variant,answer")
    sp.add_argument("--dataset", required=True)
    sp.add_argument("--rounds", type=int, default=10, help="rounds per prompt in the experiment design")
    sp.add_argument("--json", help="also write the report as JSON here")
    output(sp)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (NoOpportunity, NoKillableMutant, LogTruthMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EquivBenchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
