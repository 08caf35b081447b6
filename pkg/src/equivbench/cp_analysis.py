"""Copy-propagation annotations.

A :class:`CopySet` is a set of unordered variable pairs that is closed under
symmetry and transitivity, i.e. a partition of some variables into classes of
copies. :func:`judge_cp` implements one pass of the inference rules and
:func:`infer_cp` iterates it over the whole program from empty annotations
until nothing changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .errors import IterationLimitExceeded
from .fixpoint import AnnotationMap, dump, run_rounds
from .scope import MUTATING_METHODS, vars_of
from .syntax import (
    Assign, ExprStmt, For, FunDef, If, MethodCall, Program, Return,
    SubscriptAssign, Var, While, stmt_exprs, walk_expr,
)

CpAnnotationMap = AnnotationMap


@dataclass(frozen=True)
class CopySet:
    pairs: frozenset = frozenset()

    def __contains__(self, pair) -> bool:
        x, y = pair
        return x == y or frozenset((x, y)) in self.pairs

    def __iter__(self):
        return iter(sorted(tuple(sorted(p)) for p in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __le__(self, other: "CopySet") -> bool:
        return self.pairs <= other.pairs

    def copies_of(self, x: str) -> set[str]:
        return {y for p in self.pairs if x in p for y in p if y != x}

    def classes(self) -> list[list[str]]:
        seen: set[str] = set()
        out = []
        for a, _ in self:
            if a not in seen:
                cls = sorted({a} | self.copies_of(a))
                seen.update(cls)
                out.append(cls)
        return sorted(out)

    def variables(self) -> set[str]:
        return {v for p in self.pairs for v in p}

    def render(self) -> str:
        return "{" + ", ".join(f"{a}∼{b}" for a, b in self) + "}"

    def __repr__(self) -> str:
        return f"CopySet({self.render()})"


EMPTY = CopySet()


def st_closure(raw: Iterable) -> CopySet:
    """Smallest symmetric, transitive superset of ``raw``, without reflexive pairs."""
    parent: dict[str, str] = {}

    def find(v: str) -> str:
        while parent.setdefault(v, v) != v:
            v = parent[v]
        return v

    for x, y in raw:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    groups: dict[str, list[str]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    pairs = {frozenset(p) for g in groups.values() for p in combinations(sorted(g), 2)}
    return CopySet(frozenset(pairs))


def copyset(*pairs) -> CopySet:
    return st_closure(pairs)


def remove_var(p: CopySet, x: str) -> CopySet:
    return CopySet(frozenset(q for q in p.pairs if x not in q))


def intersect(p1: CopySet, p2: CopySet) -> CopySet:
    return CopySet(p1.pairs & p2.pairs)


def _killed(s) -> set[str]:
    """Variables whose referent a statement mutates in place."""
    out = {s.target} if isinstance(s, SubscriptAssign) else set()
    for _, e in stmt_exprs(s):
        out.update(
            n.obj.name for n in walk_expr(e)
            if isinstance(n, MethodCall) and n.method in MUTATING_METHODS and isinstance(n.obj, Var)
        )
    return out


def _kill(p: CopySet, names) -> CopySet:
    for v in sorted(names):
        p = remove_var(p, v)
    return p


def judge_cp(pre: CopySet, s, acc: Optional[AnnotationMap] = None) -> CopySet:
    """Post-annotation of ``s`` from ``pre``; records all sub-annotations in ``acc``.

    Loop invariants are read from ``acc.loops`` (the body post of the
    previous round, empty initially) and updated in place.
    """
    if acc is None:
        acc = AnnotationMap()
    post, head = pre, None
    if isinstance(s, Assign):
        v = s.value
        if isinstance(v, Var) and v.name == s.target:
            post = pre
        elif isinstance(v, Var):
            post = st_closure([*remove_var(pre, s.target), (s.target, v.name)])
        else:
            post = remove_var(_kill(pre, _killed(s)), s.target)
    elif isinstance(s, If):
        post = intersect(_judge_block(pre, s.then, acc), _judge_block(pre, s.orelse, acc))
    elif isinstance(s, While):
        head = intersect(pre, acc.loops.get(s.sid, EMPTY))
        acc.loops[s.sid] = _judge_block(head, s.body, acc)
        post = head
    elif isinstance(s, For):
        head = remove_var(intersect(pre, acc.loops.get(s.sid, EMPTY)), s.var)
        acc.loops[s.sid] = _judge_block(head, s.body, acc)
        post = head
    elif isinstance(s, FunDef):
        _judge_block(EMPTY, s.body, acc)
        post = pre
    elif isinstance(s, (SubscriptAssign, ExprStmt, Return)):
        post = _kill(pre, _killed(s))
    acc.record(s.sid, pre, post, head)
    return post


def _judge_block(pre: CopySet, stmts, acc: AnnotationMap) -> CopySet:
    for s in stmts:
        pre = judge_cp(pre, s, acc)
    return pre


def iteration_limit(p: Program) -> int:
    n_vars = len(vars_of(p))
    loops = sum(isinstance(s, (While, For)) for s in p.statements())
    return n_vars * n_vars * (loops + 1) + len(p) + 2


def _check_monotone(before: AnnotationMap, after: AnnotationMap) -> None:
    for sid, a in after.entries.items():
        b = before.entries[sid]
        if not (b.pre <= a.pre and b.post <= a.post):
            raise AssertionError(f"copy annotation of statement {sid} shrank between rounds")


def infer_cp_history(p: Program, check_monotone: bool = False) -> list[AnnotationMap]:
    """All approximants, from the all-empty one to the fixpoint."""
    return run_rounds(
        p,
        lambda acc: _judge_block(EMPTY, p.body, acc),
        lambda: EMPTY,
        iteration_limit(p),
        _check_monotone if check_monotone else None,
    )


def infer_cp(p: Program, check_monotone: bool = False) -> AnnotationMap:
    return infer_cp_history(p, check_monotone)[-1]


def dump_cp(p: Program, amap: Optional[AnnotationMap] = None) -> str:
    return dump(p, amap if amap is not None else infer_cp(p), CopySet.render)


__all__ = [
    "CopySet", "CpAnnotationMap", "EMPTY", "IterationLimitExceeded", "copyset", "dump_cp",
    "infer_cp", "infer_cp_history", "intersect", "judge_cp", "remove_var", "st_closure",
]
