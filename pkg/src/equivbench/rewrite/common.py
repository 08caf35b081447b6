"""Plumbing shared by the rewrite rules: locating blocks, rebuilding programs, traces."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Optional

from ..cf_analysis import infer_cf
from ..cp_analysis import infer_cp
from ..flow import DefiniteAssignment, Liveness
from ..printer import print_expr, print_stmt
from ..scope import expr_vars
from ..syntax import (
    BinOp, Call, Const, DictLit, FunDef, ListLit, Pass, Program, UnOp, Var,
    blocks_of, walk_stmts,
)
from ..ops import is_int

TOP_LEVEL = -1
BlockKey = tuple  # (owner sid or TOP_LEVEL, field name)


def make_block(stmts, optional: bool = False) -> tuple:
    """Drop ``pass`` fillers; an emptied mandatory block becomes ``(Pass(),)``."""
    out = tuple(s for s in stmts if not isinstance(s, Pass))
    if out or optional:
        return out
    return (Pass(),)


def _rebuild(stmts: tuple, key: BlockKey, new: tuple) -> tuple:
    out = []
    for s in stmts:
        if s.sid == key[0]:
            s = replace(s, **{key[1]: new})
        else:
            changes = {name: _rebuild(block, key, new) for name, block in blocks_of(s)}
            if changes:
                s = replace(s, **changes)
        out.append(s)
    return tuple(out)


def replace_block(p: Program, key: BlockKey, stmts) -> Program:
    new = make_block(stmts, optional=key[1] == "orelse")
    if key[0] == TOP_LEVEL:
        return Program(new)
    return Program(_rebuild(p.body, key, new))


def locate(p: Program) -> tuple[dict, dict]:
    """``(parents, blocks)``: sid → (block key, index) and block key → statements."""
    parents: dict[int, tuple] = {}
    blocks: dict[BlockKey, tuple] = {}

    def visit(stmts, key):
        blocks[key] = stmts
        for i, s in enumerate(stmts):
            parents[s.sid] = (key, i)
            for name, block in blocks_of(s):
                visit(block, (s.sid, name))

    visit(p.body, (TOP_LEVEL, "body"))
    return parents, blocks


def render(stmts) -> str:
    return "; ".join(print_stmt(s) for s in stmts) or "ε"


# -- expression predicates ----------------------------------------------------

SAFE_CALLS = frozenset({"len", "abs"})
MAX_SAFE_EXPONENT = 64


def is_safe(e, defined) -> bool:
    """``e`` has no side effects and cannot raise (assuming well-typed operands).

    Every variable must be definitely assigned; subscripts, method calls,
    user calls and I/O are excluded; division needs a nonzero literal
    divisor and powers a small non-negative literal exponent.
    """
    if not expr_vars(e) <= set(defined):
        return False
    return _safe(e)


def _safe(e) -> bool:
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, BinOp):
        if e.op in ("/", "//", "%"):
            r = e.right
            if not (isinstance(r, Const) and type(r.value) in (int, float) and r.value != 0):
                return False
        if e.op == "**":
            r = e.right
            if not (isinstance(r, Const) and is_int(r.value) and 0 <= r.value <= MAX_SAFE_EXPONENT):
                return False
        return _safe(e.left) and _safe(e.right)
    if isinstance(e, UnOp):
        return _safe(e.operand)
    if isinstance(e, Call):
        return e.func in SAFE_CALLS and len(e.args) == 1 and _safe(e.args[0])
    if isinstance(e, ListLit):
        return all(_safe(x) for x in e.items)
    if isinstance(e, DictLit):
        return all(_safe(x) for x in (*e.keys, *e.values))
    return False


def contains_fundef(stmts) -> bool:
    return any(isinstance(s, FunDef) for s in walk_stmts(tuple(stmts)))


# -- analysis context -----------------------------------------------------------

class Context:
    """A program plus lazily computed analyses; rebuilt after every rewrite."""

    def __init__(self, program: Program) -> None:
        self.program = program
        self.parents, self.blocks = locate(program)

    @cached_property
    def cp(self):
        return infer_cp(self.program)

    @cached_property
    def cf(self):
        return infer_cf(self.program)

    @cached_property
    def live(self) -> Liveness:
        return Liveness(self.program)

    @cached_property
    def defined(self) -> DefiniteAssignment:
        return DefiniteAssignment(self.program)

    def block_of(self, sid: int) -> tuple[BlockKey, tuple, int]:
        key, i = self.parents[sid]
        return key, self.blocks[key], i

    def owner(self, key: BlockKey):
        return None if key[0] == TOP_LEVEL else self.program[key[0]]


# -- steps and traces -------------------------------------------------------------

@dataclass(frozen=True)
class RewriteStep:
    rule: str
    site: int
    before: str
    after: str

    def line(self, n: int) -> str:
        return f"step {n}: {self.rule} at stmt {self.site}: «{self.before}» => «{self.after}»"


@dataclass(frozen=True)
class Firing:
    """What a rule returns when it fires."""

    program: Program
    before: str
    after: str
    rule: str = ""  # overrides the registered rule id (e.g. CF4 variants)


Rule = Callable[[Context, object], Optional[Firing]]


@dataclass
class Trace:
    original: Program
    result: Program
    steps: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def extend(self, other: "Trace") -> None:
        self.steps.extend(other.steps)
        self.result = other.result

    def text(self) -> str:
        return "".join(s.line(i + 1) + "\n" for i, s in enumerate(self.steps))


__all__ = [
    "Context", "Firing", "RewriteStep", "Rule", "Trace", "contains_fundef", "is_safe",
    "locate", "make_block", "print_expr", "render", "replace_block",
]
