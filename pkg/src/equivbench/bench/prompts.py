"""Rendering a variant set as one of the four benchmark prompts.

A prompt is a preamble followed by code snippets, the reference first. The
single-class prompts carry the four equivalent programs; the multi-class ones
add the four bug-injected programs. The order of the non-reference snippets
is shuffled by an explicit seed, which is written into the prompt's first
line so any rendered prompt can be regenerated.
"""

from __future__ import annotations

import enum
import json
import random
import re
from dataclasses import dataclass
from pathlib import Path

from ..fsutil import write_atomic
from ..parser import parse
from ..perturb.dataset import CORRECT, INCORRECT, VariantSet, dataset_algorithms, load_variant_set, sub_seed
from ..printer import print_program
from ..syntax import FunDef, Program

CONTEXTLESS_PREAMBLE = "Are the following functions semantically equivalent to the first one?"
CONTEXTUAL_PREAMBLE = " ".join((
    "You are a chatbot for comparing the semantics of small Python programs.",
    "I will provide you with multiple implementations of the same Python function.",
    "The first function is the reference version.",
    "The other functions are perturbed with copy propagation, constant folding or a combination of the two.",
    "Tell me whether the functions are semantically equivalent to the reference version or not.",
))

SEED_LINE = "# order-seed: {seed}"
SNIPPET_LINE = "# Function {index}"
_SNIPPET_RE = re.compile(r"^# Function (\d+)$", re.MULTILINE)
_SEED_RE = re.compile(r"^# order-seed: (-?\d+)$", re.MULTILINE)


class PromptKind(enum.Enum):
    P1 = "P1"  # single-class, contextless
    P2 = "P2"  # single-class, contextual
    P3 = "P3"  # multi-class, contextless
    P4 = "P4"  # multi-class, contextual

    @property
    def multi_class(self) -> bool:
        return self in (PromptKind.P3, PromptKind.P4)

    @property
    def contextual(self) -> bool:
        return self in (PromptKind.P2, PromptKind.P4)

    @property
    def preamble(self) -> str:
        return CONTEXTUAL_PREAMBLE if self.contextual else CONTEXTLESS_PREAMBLE

    @property
    def variants(self) -> tuple[str, ...]:
        """Every variant shown in this kind of prompt, reference included."""
        return CORRECT + INCORRECT if self.multi_class else CORRECT

    @property
    def snippet_count(self) -> int:
        return len(self.variants)


@dataclass(frozen=True)
class RenderedPrompt:
    algorithm: str
    kind: PromptKind
    seed: int
    order: tuple  # variant name at each snippet position, reference first
    text: str


def snippet_order(kind: PromptKind, order_seed: int) -> tuple[str, ...]:
    """The reference first, then the remaining variants of ``kind`` shuffled by ``order_seed``."""
    rest = [v for v in kind.variants if v != "ref"]
    random.Random(order_seed).shuffle(rest)
    return ("ref", *rest)


def render(vs: VariantSet, kind: PromptKind, order_seed: int) -> RenderedPrompt:
    order = snippet_order(kind, order_seed)
    parts = [SEED_LINE.format(seed=order_seed), kind.preamble]
    for index, v in enumerate(order, 1):
        parts.append(SNIPPET_LINE.format(index=index) + "\n" + print_program(vs.programs[v]).rstrip("\n"))
    return RenderedPrompt(vs.name, kind, order_seed, order, "\n\n".join(parts) + "\n")


def render_prompt(vs: VariantSet, kind: PromptKind, order_seed: int) -> str:
    """The prompt text: seed comment, preamble, then the snippets separated by ``# Function k`` lines."""
    return render(vs, kind, order_seed).text


def prompt_seed(text: str) -> int:
    m = _SEED_RE.search(text)
    if m is None:
        raise ValueError("prompt has no order-seed line")
    return int(m.group(1))


def split_snippets(text: str) -> list[Program]:
    """Parse a rendered prompt back into its snippets (one Program per ``# Function k`` section)."""
    marks = list(_SNIPPET_RE.finditer(text))
    out = []
    for m, nxt in zip(marks, marks[1:] + [None]):
        chunk = text[m.end(): nxt.start() if nxt else len(text)]
        out.append(parse(chunk.strip("\n") + "\n"))
    return out


def count_function_snippets(text: str) -> int:
    """Number of snippets in a rendered prompt that define at least one function."""
    return sum(any(isinstance(s, FunDef) for s in p.body) for p in split_snippets(text))


def render_all(dataset_dir, seed: int, out) -> dict:
    """Write ``<out>/<algo>/P1.txt … P4.txt`` for every algorithm of a dataset tree, plus a key file.

    Each prompt's order seed is derived from ``seed``, the algorithm and the
    kind. ``<out>/prompts.json`` maps every snippet position back to its
    variant name, which the scorer needs to interpret answers.
    """
    out = Path(out)
    key: dict = {"seed": seed, "prompts": {}}
    for name in dataset_algorithms(dataset_dir):
        vs = load_variant_set(dataset_dir, name)
        for kind in PromptKind:
            rp = render(vs, kind, sub_seed(seed, name, kind.value))
            write_atomic(out / name / f"{kind.value}.txt", rp.text)
            key["prompts"][f"{name}/{kind.value}"] = {"order_seed": rp.seed, "order": list(rp.order)}
    write_atomic(out / "prompts.json", json.dumps(key, indent=2, sort_keys=True) + "\n")
    return key
