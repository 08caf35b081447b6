"""Assembling the 8-variant sets and writing the dataset tree."""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..corpus import Algorithm, corpus_hash, load_corpus
from ..errors import EquivBenchError, PerturbationError
from ..fsutil import write_atomic
from ..interp import Verdict, equivalent
from ..manifest import Case, TestManifest
from ..parser import parse
from ..printer import print_program
from ..rewrite import normalize
from ..syntax import Program
from .bugs import BugDescriptor, inject_bug
from .obfuscate import obfuscation_map, rename
from .variants import PerturbationKind, perturb

CORRECT = ("ref", "cp", "cf", "cp_cf")
INCORRECT = ("bug_ref", "bug_cp", "bug_cf", "bug_cp_cf")
VARIANTS = CORRECT + INCORRECT


def sub_seed(seed: int, *parts: str) -> int:
    """A stable per-purpose seed (Python's ``hash`` is salted per process, so it is not used)."""
    return zlib.crc32(":".join((str(seed), *parts)).encode()) & 0x7FFFFFFF


@dataclass
class VariantSet:
    name: str
    seed: int
    programs: dict = field(default_factory=dict)   # variant → obfuscated Program
    labels: dict = field(default_factory=dict)     # variant → Verdict against ref
    names: dict = field(default_factory=dict)      # variant → obfuscation map
    moves: dict = field(default_factory=dict)      # variant → perturbation move log
    bugs: dict = field(default_factory=dict)       # variant → BugDescriptor
    entry: Optional[str] = None                    # obfuscated entry name

    def __getitem__(self, variant: str) -> Program:
        return self.programs[variant]

    def check(self) -> None:
        """Assert the set's invariants: 8 programs, 4 equivalent, 4 not, each with a witness."""
        if set(self.programs) != set(VARIANTS):
            raise PerturbationError(f"{self.name}: expected 8 variants, got {sorted(self.programs)}")
        for v in CORRECT:
            if self.labels[v].equivalent != "yes":
                raise PerturbationError(f"{self.name}/{v} is labelled {self.labels[v].equivalent}")
        for v in INCORRECT:
            if self.labels[v].equivalent != "no" or self.labels[v].witness is None:
                raise PerturbationError(f"{self.name}/{v} lacks a witness")

    def labels_json(self) -> dict:
        out = {}
        for v in VARIANTS:
            verdict: Verdict = self.labels[v]
            out[v] = {
                "class": "correct" if v in CORRECT else "incorrect",
                "equivalent": verdict.equivalent,
                "witness": None if verdict.witness is None else verdict.witness.to_json(),
                "names": self.names[v],
            }
            if v in self.bugs:
                out[v]["bug"] = self.bugs[v].to_json()
        return {"algorithm": self.name, "seed": self.seed, "entry": self.entry, "variants": out}

    def trace_text(self) -> str:
        lines = []
        for v in VARIANTS:
            if v in self.moves:
                lines.append(f"{v}: " + ("; ".join(self.moves[v]) or "unchanged"))
            if v in self.bugs:
                b: BugDescriptor = self.bugs[v]
                lines.append(f"{v}: {b.kind} at stmt {b.site[0]}: «{b.before}» => «{b.after}» "
                             f"(witness {b.witness})")
        return "\n".join(lines) + "\n"


def _obfuscated_manifest(m: TestManifest, entry: Optional[str]) -> TestManifest:
    return TestManifest(entry or m.entry, m.cases, m.fuel, m.comparison, m.tolerance)


def build_variant_set(algo: Algorithm, seed: int, check_normal_forms: bool = True) -> VariantSet:
    """Generate, verify and obfuscate the 8 variants of one algorithm."""
    ref, m = algo.program, algo.manifest
    raw: dict[str, Program] = {"ref": ref}
    vs = VariantSet(algo.name, seed)
    vs.moves["ref"] = []
    for kind in PerturbationKind:
        program, moves = perturb(ref, kind, sub_seed(seed, algo.name, kind.value))
        verdict = equivalent(ref, program, m)
        if verdict.equivalent != "yes":
            raise PerturbationError(f"{algo.name}/{kind.value}: perturbation changed behaviour on {verdict.witness}")
        if check_normal_forms:
            nv = equivalent(normalize(ref)[0], normalize(program)[0], m)
            if nv.equivalent != "yes":
                raise PerturbationError(f"{algo.name}/{kind.value}: normal forms differ on {nv.witness}")
        raw[kind.value] = program
        vs.moves[kind.value] = moves
    for v in CORRECT:
        bugged, descriptor = inject_bug(raw[v], sub_seed(seed, algo.name, "bug", v), m, reference=ref)
        raw[f"bug_{v}"] = bugged
        vs.bugs[f"bug_{v}"] = descriptor

    ref_names = obfuscation_map(ref, seed)
    vs.entry = ref_names.get(m.entry, m.entry) if not m.script else None
    obf_ref = rename(ref, ref_names)
    for v in VARIANTS:
        names = obfuscation_map(raw[v], seed)
        vs.names[v] = names
        vs.programs[v] = rename(raw[v], names)
        entry_v = names.get(m.entry) if not m.script else None
        vs.labels[v] = equivalent(obf_ref, vs.programs[v], _obfuscated_manifest(m, vs.entry), entry2=entry_v)
    vs.check()
    return vs


def build_dataset(corpus_dir, seed: int, out) -> dict:
    """Write ``<out>/<algo>/{8 variants}.py``, ``labels.json``, ``trace.txt`` and ``dataset.json``.

    Returns the top-level summary. Per-algorithm failures are recorded as a
    status in the summary rather than aborting the whole run.
    """
    out = Path(out)
    summary: dict = {"seed": seed, "corpus_hash": corpus_hash(corpus_dir), "algorithms": {}}
    for algo in load_corpus(corpus_dir):
        try:
            vs = build_variant_set(algo, seed)
        except EquivBenchError as exc:
            summary["algorithms"][algo.name] = {"status": f"failed: {type(exc).__name__}: {exc}"}
            continue
        d = out / algo.name
        for v in VARIANTS:
            write_atomic(d / f"{v}.py", print_program(vs.programs[v]))
        write_atomic(d / "labels.json", json.dumps(vs.labels_json(), indent=2, sort_keys=True) + "\n")
        write_atomic(d / "trace.txt", vs.trace_text())
        summary["algorithms"][algo.name] = {"status": "ok", "files": [f"{v}.py" for v in VARIANTS]}
    summary["programs"] = sum(len(a.get("files", ())) for a in summary["algorithms"].values())
    write_atomic(out / "dataset.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def load_variant_programs(dataset_dir, name: str) -> dict[str, str]:
    d = Path(dataset_dir) / name
    return {v: (d / f"{v}.py").read_text(encoding="utf-8") for v in VARIANTS}


def load_variant_set(dataset_dir, name: str) -> VariantSet:
    """Rebuild a :class:`VariantSet` from a dataset tree written by :func:`build_dataset`.

    Labels are restored from ``labels.json`` (verdict and witness only; the
    stored outcomes are not part of the on-disk format).
    """
    d = Path(dataset_dir) / name
    meta = json.loads((d / "labels.json").read_text(encoding="utf-8"))
    vs = VariantSet(meta["algorithm"], meta["seed"], entry=meta.get("entry"))
    for v in VARIANTS:
        vs.programs[v] = parse((d / f"{v}.py").read_text(encoding="utf-8"))
        info = meta["variants"][v]
        witness = None if info["witness"] is None else Case.from_json(info["witness"])
        vs.labels[v] = Verdict(info["equivalent"], witness)
        vs.names[v] = info["names"]
    return vs


def dataset_algorithms(dataset_dir) -> list[str]:
    """Algorithms recorded as successfully generated in ``dataset.json``, in file order."""
    summary = json.loads((Path(dataset_dir) / "dataset.json").read_text(encoding="utf-8"))
    return [name for name, info in summary["algorithms"].items() if info.get("status") == "ok"]
