"""Shared annotation containers and the round-based fixpoint driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Generic, Optional, TypeVar

from .errors import IterationLimitExceeded
from .printer import print_stmt
from .syntax import For, Program, While

A = TypeVar("A")


@dataclass(frozen=True)
class Annotation(Generic[A]):
    """Facts before and after one statement; loops also record their head invariant."""

    pre: A
    post: A
    head: Optional[A] = None


@dataclass
class AnnotationMap(Generic[A]):
    """Statement-id → :class:`Annotation`, plus the per-loop body approximants."""

    entries: dict = field(default_factory=dict)
    loops: dict = field(default_factory=dict)

    def __getitem__(self, sid: int) -> Annotation:
        return self.entries[sid]

    def __contains__(self, sid: int) -> bool:
        return sid in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def pre(self, sid: int) -> A:
        return self.entries[sid].pre

    def post(self, sid: int) -> A:
        return self.entries[sid].post

    def head(self, sid: int) -> A:
        """Loop-head invariant for loops, ``pre`` otherwise."""
        e = self.entries[sid]
        return e.pre if e.head is None else e.head

    def record(self, sid: int, pre: A, post: A, head: Optional[A] = None) -> None:
        self.entries[sid] = Annotation(pre, post, head)

    def copy(self) -> "AnnotationMap[A]":
        return AnnotationMap(dict(self.entries), dict(self.loops))

    def same_as(self, other: "AnnotationMap[A]") -> bool:
        return self.entries == other.entries and self.loops == other.loops


def run_rounds(
    program: Program,
    one_round: Callable[[AnnotationMap], None],
    empty: Callable[[], A],
    limit: int,
    on_round: Optional[Callable[[AnnotationMap, AnnotationMap], None]] = None,
) -> list[AnnotationMap]:
    """Re-judge the whole program until the annotations stop changing.

    Returns every approximant, starting with the all-empty one; the last
    element is the fixpoint. ``on_round(previous, current)`` is called after
    each round, e.g. to check monotonicity.
    """
    start: AnnotationMap = AnnotationMap()
    for s in program.statements():
        start.record(s.sid, empty(), empty(), empty() if isinstance(s, (While, For)) else None)
    history = [start]
    for _ in range(limit):
        current = history[-1].copy()
        one_round(current)
        if on_round is not None:
            on_round(history[-1], current)
        if current.same_as(history[-1]):
            return history
        history.append(current)
    raise IterationLimitExceeded(f"no fixpoint after {limit} rounds")


def dump(program: Program, amap: AnnotationMap, render: Callable[[object], str]) -> str:
    """One line per statement, ``«stmt» ⊨ pre={…} post={…}``, indented by nesting depth."""
    lines = []

    def walk(stmts, depth):
        for s in stmts:
            a = amap[s.sid]
            pre = a.pre if a.head is None else a.head
            lines.append(f"{'    ' * depth}«{print_stmt(s)}» ⊨ pre={render(pre)} post={render(a.post)}")
            for name in ("then", "orelse", "body"):
                block = getattr(s, name, None)
                if block:
                    walk(block, depth + 1)

    walk(program.body, 0)
    return "\n".join(lines) + "\n"
