"""Scoring labelled chatbot answers into accuracy tables.

A response log is a CSV with one row per (algorithm, prompt, chatbot, round,
variant) holding a yes/no answer to "is this snippet equivalent to the
reference?". The ground truth comes from the dataset's ``labels.json`` files.
All percentages are rounded to two decimals, half-up.
"""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from statistics import fmean
from typing import Iterable, Optional

from ..errors import LogTruthMismatch
from ..perturb.dataset import CORRECT, INCORRECT, dataset_algorithms
from .prompts import PromptKind

COLUMNS = ("algorithm", "prompt", "chatbot", "round", "variant", "answer")
ANSWERS = ("yes", "no")
ROUNDS = 10
PERTURBATIONS = ("cp", "cf", "cp_cf")

# Column order of the published tables; other labels follow alphabetically.
CHATBOTS = ("copilot-claude", "copilot-chatgpt", "amazon-q", "gemini", "chatgpt", "deepseek", "claude")


def round_half_up(x: float, places: int = 2) -> float:
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def percent(hits: int, total: int) -> Optional[float]:
    return None if total == 0 else 100.0 * hits / total


@dataclass(frozen=True)
class Row:
    algorithm: str
    prompt: str
    chatbot: str
    round: int
    variant: str
    answer: str


def read_log(source) -> list[Row]:
    """Read ``runs.csv`` from a path or an open text stream."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_log(fh)
    reader = csv.DictReader(source)
    missing = [c for c in COLUMNS if c not in (reader.fieldnames or ())]
    if missing:
        raise ValueError(f"log is missing columns: {', '.join(missing)}")
    return [Row(r["algorithm"].strip(), r["prompt"].strip(), r["chatbot"].strip(), int(r["round"]),
                r["variant"].strip(), r["answer"].strip().lower()) for r in reader]


def write_log(rows: Iterable[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow((r.algorithm, r.prompt, r.chatbot, r.round, r.variant, r.answer))
    return buf.getvalue()


def load_truth(dataset_dir) -> dict[str, dict[str, str]]:
    """``{algorithm: {variant: "yes"|"no"}}`` from a dataset tree."""
    truth = {}
    for name in dataset_algorithms(dataset_dir):
        meta = json.loads((Path(dataset_dir) / name / "labels.json").read_text(encoding="utf-8"))
        truth[name] = {v: info["equivalent"] for v, info in meta["variants"].items()}
    return truth


def standard_truth(algorithms: Iterable[str]) -> dict[str, dict[str, str]]:
    """The labels every well-formed variant set has: correct variants yes, bug variants no."""
    labels = {**{v: "yes" for v in CORRECT}, **{v: "no" for v in INCORRECT}}
    return {a: dict(labels) for a in algorithms}


@dataclass
class Tally:
    hits: int = 0
    total: int = 0

    def add(self, hit: bool) -> None:
        self.hits += hit
        self.total += 1

    @property
    def accuracy(self) -> Optional[float]:
        return percent(self.hits, self.total)


@dataclass
class Cell:
    """One (chatbot, prompt) cell: the two classes tallied separately."""

    correct: Tally = field(default_factory=Tally)
    incorrect: Tally = field(default_factory=Tally)

    @property
    def overall(self) -> Optional[float]:
        # Weighted by instance counts, i.e. pooled hits over pooled answers.
        return percent(self.correct.hits + self.incorrect.hits, self.correct.total + self.incorrect.total)


def _chatbot_key(label: str):
    return (CHATBOTS.index(label), "") if label in CHATBOTS else (len(CHATBOTS), label)


def _fmt(x: Optional[float]) -> str:
    return "-" if x is None else f"{round_half_up(x):.2f}%"


def _avg(values) -> Optional[float]:
    values = [v for v in values if v is not None]
    return fmean(values) if values else None


@dataclass
class AccuracyReport:
    chatbots: list
    prompts: list
    cells: dict            # (chatbot, prompt) → Cell
    perturbations: dict    # (algorithm, perturbation, chatbot) → Tally
    algorithms: list

    def accuracy(self, chatbot: str, prompt: str, which: str = "correct") -> Optional[float]:
        cell = self.cells.get((chatbot, prompt))
        if cell is None:
            return None
        return cell.overall if which == "overall" else getattr(cell, which).accuracy

    def row(self, prompt: str, which: str = "correct") -> list[Optional[float]]:
        return [self.accuracy(c, prompt, which) for c in self.chatbots]

    def row_average(self, prompt: str, which: str = "correct") -> Optional[float]:
        """Unweighted mean over chatbots of the (unrounded) cell accuracies."""
        return _avg(self.row(prompt, which))

    def column_average(self, chatbot: str, which: str = "correct", prompts=None) -> Optional[float]:
        return _avg(self.accuracy(chatbot, p, which) for p in (prompts or self.prompts))

    def perturbation_accuracy(self, algorithm: str, perturbation: str, chatbot: str) -> Optional[float]:
        t = self.perturbations.get((algorithm, perturbation, chatbot))
        return None if t is None else t.accuracy

    def perturbation_average(self, algorithm: str, perturbation: str) -> Optional[float]:
        return _avg(self.perturbation_accuracy(algorithm, perturbation, c) for c in self.chatbots)

    # -- rendering ---------------------------------------------------------

    def _table(self, title: str, header: list[str], rows: list[list[str]]) -> str:
        widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
        line = lambda r: "  ".join(s.ljust(w) if i == 0 else s.rjust(w) for i, (s, w) in enumerate(zip(r, widths)))
        return "\n".join([title, line(header), "-" * len(line(header))] + [line(r) for r in rows])

    def to_text(self) -> str:
        header = ["", *self.chatbots, "Average"]
        blocks = []
        rows = []
        for p in self.prompts:
            rows.append([f"#{p[1:]} / Correct", *map(_fmt, self.row(p)), _fmt(self.row_average(p))])
        rows.append(["Average", *(_fmt(self.column_average(c)) for c in self.chatbots),
                     _fmt(_avg(self.column_average(c) for c in self.chatbots))])
        blocks.append(self._table("Correct class", header, rows))
        multi = [p for p in self.prompts if PromptKind(p).multi_class]
        if multi:
            rows = []
            for p in multi:
                for which in ("correct", "incorrect", "overall"):
                    rows.append([f"#{p[1:]} / {which.capitalize()}", *map(_fmt, self.row(p, which)),
                                 _fmt(self.row_average(p, which))])
            blocks.append(self._table("Both classes", header, rows))
        rows = []
        for a in self.algorithms:
            for k in PERTURBATIONS:
                vals = [self.perturbation_accuracy(a, k, c) for c in self.chatbots]
                if any(v is not None for v in vals):
                    rows.append([f"{a} / {k}", *map(_fmt, vals), _fmt(self.perturbation_average(a, k))])
        if rows:
            blocks.append(self._table("By perturbation", header, rows))
        return "\n\n".join(blocks) + "\n"

    def to_json(self) -> dict:
        r = lambda x: None if x is None else round_half_up(x)
        cells = {}
        for (c, p), cell in sorted(self.cells.items()):
            cells.setdefault(p, {})[c] = {
                "correct": r(cell.correct.accuracy), "incorrect": r(cell.incorrect.accuracy),
                "overall": r(cell.overall),
                "counts": {"correct": [cell.correct.hits, cell.correct.total],
                           "incorrect": [cell.incorrect.hits, cell.incorrect.total]},
            }
        return {
            "chatbots": self.chatbots,
            "prompts": self.prompts,
            "cells": cells,
            "row_averages": {p: {w: r(self.row_average(p, w)) for w in ("correct", "incorrect", "overall")}
                             for p in self.prompts},
            "column_averages": {c: r(self.column_average(c)) for c in self.chatbots},
            "perturbations": {f"{a}/{k}": {c: r(self.perturbation_accuracy(a, k, c)) for c in self.chatbots}
                              | {"average": r(self.perturbation_average(a, k))}
                              for a in self.algorithms for k in PERTURBATIONS
                              if any((a, k, c) in self.perturbations for c in self.chatbots)},
        }


def _orphan_reason(row: Row, truth: dict) -> Optional[str]:
    if row.algorithm not in truth:
        return "unknown algorithm"
    try:
        kind = PromptKind(row.prompt)
    except ValueError:
        return "unknown prompt kind"
    if row.variant not in kind.variants or row.variant not in truth[row.algorithm]:
        return f"variant not shown in {kind.value}"
    if row.answer not in ANSWERS:
        return "answer is not yes/no"
    if not 1 <= row.round <= ROUNDS:
        return "round out of range"
    return None


def score(rows: Iterable[Row], truth: dict) -> AccuracyReport:
    """Aggregate answers into per-(chatbot, prompt) class accuracies and the per-perturbation breakdown.

    Raises :class:`LogTruthMismatch` listing every row that does not fit the
    dataset (unknown algorithm, prompt kind or variant, bad answer or round).
    """
    rows = list(rows)
    orphans = [(i, r, why) for i, r in enumerate(rows, 2) if (why := _orphan_reason(r, truth))]
    if orphans:
        raise LogTruthMismatch(orphans)
    cells: dict = defaultdict(Cell)
    perturbations: dict = defaultdict(Tally)
    for r in rows:
        expected = truth[r.algorithm][r.variant]
        hit = r.answer == expected
        cell = cells[(r.chatbot, r.prompt)]
        (cell.correct if expected == "yes" else cell.incorrect).add(hit)
        if r.variant in PERTURBATIONS:
            perturbations[(r.algorithm, r.variant, r.chatbot)].add(hit)
    chatbots = sorted({r.chatbot for r in rows}, key=_chatbot_key)
    prompts = sorted({r.prompt for r in rows})
    algorithms = sorted({r.algorithm for r in rows})
    return AccuracyReport(chatbots, prompts, dict(cells), dict(perturbations), algorithms)


# -- experiment design --------------------------------------------------------

@dataclass
class DesignReport:
    """How a log compares with the full algorithms × prompts × chatbots × rounds grid."""

    responses: int
    expected_responses: int
    single_class_answers: int
    multi_class_answers: int
    reading: Optional[str]           # "non-reference", "reference-included" or None
    incomplete: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.reading is not None and self.responses == self.expected_responses


READINGS = {
    # Whether the reference snippet itself gets an answer.
    "non-reference": lambda kind: tuple(v for v in kind.variants if v != "ref"),
    "reference-included": lambda kind: kind.variants,
}


def expected_counts(algorithms: int, chatbots: int, rounds: int = ROUNDS, reading: str = "non-reference") -> dict:
    """Responses and per-class answer counts a complete experiment produces."""
    per = {k: len(READINGS[reading](k)) for k in PromptKind}
    unit = algorithms * chatbots * rounds
    return {
        "responses": unit * len(PromptKind),
        "single_class_answers": unit * (per[PromptKind.P1] + per[PromptKind.P2]),
        "multi_class_answers": unit * (per[PromptKind.P3] + per[PromptKind.P4]),
    }


def validate_design(rows: Iterable[Row], algorithms: Iterable[str], chatbots: Iterable[str],
                    rounds: int = ROUNDS) -> DesignReport:
    """Check the log covers the full grid and say which answer reading it satisfies.

    Every (algorithm, prompt, chatbot, round) response must answer exactly the
    same variant set, either all non-reference snippets or all snippets.
    """
    algorithms, chatbots = sorted(set(algorithms)), sorted(set(chatbots))
    answered: dict = defaultdict(set)
    for r in rows:
        answered[(r.algorithm, r.prompt, r.chatbot, r.round)].add(r.variant)
    grid = [(a, k, c, n) for a in algorithms for k in PromptKind for c in chatbots for n in range(1, rounds + 1)]
    reading = None
    for name, shown in READINGS.items():
        if all(answered.get((a, k.value, c, n)) == set(shown(k)) for a, k, c, n in grid):
            reading = name
            break
    incomplete = [] if reading else [
        (a, k.value, c, n) for a, k, c, n in grid
        if answered.get((a, k.value, c, n)) not in (set(f(k)) for f in READINGS.values())
    ]
    multi_kinds = {k.value for k in PromptKind if k.multi_class}
    single = sum(len(v) for (a, p, c, n), v in answered.items() if p not in multi_kinds)
    multi = sum(len(v) for (a, p, c, n), v in answered.items() if p in multi_kinds)
    return DesignReport(len(answered), len(grid), single, multi, reading, incomplete)
