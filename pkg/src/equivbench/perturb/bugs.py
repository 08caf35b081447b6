"""Seeded single-site bug injection with execution-checked non-equivalence."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional

from ..errors import NoKillableMutant
from ..flow import DefiniteAssignment
from ..interp import equivalent
from ..manifest import Case, TestManifest
from ..ops import is_int
from ..printer import print_expr
from ..rewrite.common import locate, replace_block
from ..syntax import (
    BinOp, Call, Const, Program, Slice, Subscript, SubscriptAssign, Var, get_at, replace_at, stmt_exprs,
    subexpressions, walk_stmts,
)

MAX_ATTEMPTS = 50

KINDS = (
    "off-by-one-bound", "comparison-flip", "wrong-variable",
    "swapped-operands", "index-shift", "constant-tweak",
)
_FLIP = {"<": "<=", "<=": "<", ">": ">=", ">=": ">", "==": "!=", "!=": "=="}
_NON_COMMUTATIVE = frozenset({"-", "/", "//", "%", "**", "<", "<=", ">", ">="})


@dataclass(frozen=True)
class BugDescriptor:
    kind: str
    site: tuple  # (sid, slot, path)
    before: str
    after: str
    witness: Optional[Case] = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind, "stmt": self.site[0], "slot": self.site[1], "path": list(self.site[2]),
            "before": self.before, "after": self.after,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _shift(e, delta: int):
    if isinstance(e, Const) and is_int(e.value):
        return Const(e.value + delta)
    return BinOp("+" if delta > 0 else "-", e, Const(abs(delta)))


def _mutations(s, scope_vars: list[str]):
    """Every ``(kind, slot, path, replacement)`` applicable to the statement's own expressions."""
    for slot, root in stmt_exprs(s):
        for path, e in subexpressions(root):
            if isinstance(e, BinOp) and e.op in _FLIP:
                yield "comparison-flip", slot, path, BinOp(_FLIP[e.op], e.left, e.right)
            if isinstance(e, BinOp) and e.op in _NON_COMMUTATIVE and e.left != e.right:
                yield "swapped-operands", slot, path, BinOp(e.op, e.right, e.left)
            if isinstance(e, Call) and e.func == "range" and e.args:
                k = 1 if len(e.args) > 1 else 0
                for delta in (1, -1):
                    args = list(e.args)
                    args[k] = _shift(args[k], delta)
                    yield "off-by-one-bound", slot, path, Call("range", tuple(args))
            if isinstance(e, BinOp) and e.op in ("<", "<=", ">", ">=") and not isinstance(e.right, Const):
                for delta in (1, -1):
                    yield "off-by-one-bound", slot, path, BinOp(e.op, e.left, _shift(e.right, delta))
            if isinstance(e, Subscript) and not isinstance(e.index, Slice):
                for delta in (1, -1):
                    yield "index-shift", slot, path, Subscript(e.value, _shift(e.index, delta))
            if isinstance(e, Const) and is_int(e.value):
                for delta in (1, -1):
                    yield "constant-tweak", slot, path, Const(e.value + delta)
            if isinstance(e, Var):
                for other in scope_vars:
                    if other != e.name:
                        yield "wrong-variable", slot, path, Var(other)
    if isinstance(s, SubscriptAssign):
        for delta in (1, -1):
            yield "index-shift", "index", (), _shift(s.index, delta)


def _candidates(p: Program) -> list:
    out = []
    defined = DefiniteAssignment(p).before
    for s in walk_stmts(p.body):
        scope = sorted(defined[s.sid])
        for kind, slot, path, new in _mutations(s, scope):
            out.append((kind, s.sid, slot, path, new))
    return out


def _apply(p: Program, sid: int, slot: str, path: tuple, new) -> Program:
    parents, blocks = locate(p)
    key, i = parents[sid]
    s = blocks[key][i]
    mutated = replace(s, **{slot: replace_at(getattr(s, slot), path, new)})
    block = blocks[key]
    return replace_block(p, key, block[:i] + (mutated,) + block[i + 1:])


def inject_bug(p: Program, seed: int, m: TestManifest, reference: Optional[Program] = None,
               entry: Optional[str] = None) -> tuple[Program, BugDescriptor]:
    """Mutate one site of ``p`` so that it is observably different from ``reference``.

    The mutation kind is drawn uniformly first, then a site of that kind.
    Candidates the manifest cannot distinguish are rejected; after
    :data:`MAX_ATTEMPTS` rejections :class:`NoKillableMutant` is raised.
    ``entry`` is the entry-function name of ``p`` if it differs from the manifest's.
    """
    reference = reference if reference is not None else p
    rng = random.Random(seed)
    pool = _candidates(p)
    by_kind: dict[str, list] = {}
    for c in pool:
        by_kind.setdefault(c[0], []).append(c)
    for _ in range(MAX_ATTEMPTS):
        kinds = [k for k in KINDS if by_kind.get(k)]
        if not kinds:
            break
        kind = kinds[rng.randrange(len(kinds))]
        options = by_kind[kind]
        kind, sid, slot, path, new = options.pop(rng.randrange(len(options)))
        mutant = _apply(p, sid, slot, path, new)
        verdict = equivalent(reference, mutant, m, entry2=entry)
        if verdict.equivalent == "no":
            old = get_at(getattr(p[sid], slot), path)
            return mutant, BugDescriptor(kind, (sid, slot, path), print_expr(old), print_expr(new), verdict.witness)
    raise NoKillableMutant(f"no killable mutant in {MAX_ATTEMPTS} attempts")
