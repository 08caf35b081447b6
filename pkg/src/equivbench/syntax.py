"""Abstract syntax for the supported Python subset.

Every node is an immutable dataclass. Statements carry a ``sid`` that is
excluded from equality, so two programs compare equal exactly when their
shapes and literals agree. :class:`Program` renumbers its statements in
pre-order whenever it is constructed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterator, Optional, Union

BINARY_OPS = (
    "+", "-", "*", "/", "//", "%", "**",
    "==", "!=", "<", "<=", ">", ">=", "in", "not in",
    "and", "or",
)
COMPARE_OPS = frozenset({"==", "!=", "<", "<=", ">", ">=", "in", "not in"})
UNARY_OPS = ("-", "not")


def const_key(value: object) -> tuple:
    """Type-aware identity of a literal: ``1``, ``True`` and ``1.0`` all differ."""
    if isinstance(value, float):
        return ("float", repr(value))
    return (type(value).__name__, value)


@dataclass(frozen=True, eq=False)
class Const:
    value: object

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Const) and const_key(self.value) == const_key(other.value)

    def __hash__(self) -> int:
        return hash(("Const", const_key(self.value)))


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnOp:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Call:
    """Call of a builtin or user function by name (``math.sqrt`` style names included)."""

    func: str
    args: tuple = ()


@dataclass(frozen=True)
class MethodCall:
    obj: "Expr"
    method: str
    args: tuple = ()


@dataclass(frozen=True)
class Subscript:
    value: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class Slice:
    lower: Optional["Expr"] = None
    upper: Optional["Expr"] = None
    step: Optional["Expr"] = None


@dataclass(frozen=True)
class ListLit:
    items: tuple = ()


@dataclass(frozen=True)
class DictLit:
    keys: tuple = ()
    values: tuple = ()


Expr = Union[Const, Var, BinOp, UnOp, Call, MethodCall, Subscript, Slice, ListLit, DictLit]
EXPR_TYPES = (Const, Var, BinOp, UnOp, Call, MethodCall, Subscript, Slice, ListLit, DictLit)


def _sid() -> int:
    return field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr
    sid: int = _sid()


@dataclass(frozen=True)
class SubscriptAssign:
    target: str
    index: Expr
    value: Expr
    sid: int = _sid()


@dataclass(frozen=True)
class If:
    guard: Expr
    then: tuple
    orelse: tuple = ()
    sid: int = _sid()


@dataclass(frozen=True)
class While:
    guard: Expr
    body: tuple
    sid: int = _sid()


@dataclass(frozen=True)
class For:
    var: str
    iterable: Expr
    body: tuple
    sid: int = _sid()


@dataclass(frozen=True)
class FunDef:
    name: str
    params: tuple
    body: tuple
    sid: int = _sid()


@dataclass(frozen=True)
class Return:
    value: Optional[Expr]
    sid: int = _sid()


@dataclass(frozen=True)
class ExprStmt:
    call: Expr
    sid: int = _sid()


@dataclass(frozen=True)
class Pass:
    sid: int = _sid()


Stmt = Union[Assign, SubscriptAssign, If, While, For, FunDef, Return, ExprStmt, Pass]
STMT_TYPES = (Assign, SubscriptAssign, If, While, For, FunDef, Return, ExprStmt, Pass)
COMPOUND = (If, While, For, FunDef)

# Block fields of compound statements, in pre-order.
BLOCK_FIELDS = {If: ("then", "orelse"), While: ("body",), For: ("body",), FunDef: ("body",)}


def blocks_of(stmt: Stmt) -> list[tuple[str, tuple]]:
    return [(name, getattr(stmt, name)) for name in BLOCK_FIELDS.get(type(stmt), ())]


def _renumber(stmts: tuple, counter: Iterator[int]) -> tuple:
    out = []
    for s in stmts:
        sid = next(counter)
        changes = {"sid": sid}
        for name, block in blocks_of(s):
            changes[name] = _renumber(block, counter)
        out.append(replace(s, **changes))
    return tuple(out)


@dataclass(frozen=True)
class Program:
    """A whole source file: an ordered body of statements with dense pre-order ids."""

    body: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "body", _renumber(tuple(self.body), itertools.count()))
        object.__setattr__(self, "_index", None)

    def statements(self) -> list:
        """All statements, indexed by sid."""
        if self._index is None:
            object.__setattr__(self, "_index", list(walk_stmts(self.body)))
        return self._index

    def __getitem__(self, sid: int) -> Stmt:
        return self.statements()[sid]

    def __len__(self) -> int:
        return len(self.statements())

    def functions(self) -> dict[str, FunDef]:
        return {s.name: s for s in self.body if isinstance(s, FunDef)}


def walk_stmts(stmts: tuple) -> Iterator[Stmt]:
    """Pre-order traversal over a statement sequence."""
    for s in stmts:
        yield s
        for _, block in blocks_of(s):
            yield from walk_stmts(block)


# -- expressions ------------------------------------------------------------

def expr_children(e: Expr) -> list:
    """Direct sub-expressions in a fixed order; ``None`` slots are kept so paths stay stable."""
    if isinstance(e, BinOp):
        return [e.left, e.right]
    if isinstance(e, UnOp):
        return [e.operand]
    if isinstance(e, (Call, ListLit)):
        return list(e.args if isinstance(e, Call) else e.items)
    if isinstance(e, MethodCall):
        return [e.obj, *e.args]
    if isinstance(e, Subscript):
        return [e.value, e.index]
    if isinstance(e, Slice):
        return [e.lower, e.upper, e.step]
    if isinstance(e, DictLit):
        return [*e.keys, *e.values]
    return []


def with_children(e: Expr, kids: list) -> Expr:
    if isinstance(e, BinOp):
        return BinOp(e.op, kids[0], kids[1])
    if isinstance(e, UnOp):
        return UnOp(e.op, kids[0])
    if isinstance(e, Call):
        return Call(e.func, tuple(kids))
    if isinstance(e, ListLit):
        return ListLit(tuple(kids))
    if isinstance(e, MethodCall):
        return MethodCall(kids[0], e.method, tuple(kids[1:]))
    if isinstance(e, Subscript):
        return Subscript(kids[0], kids[1])
    if isinstance(e, Slice):
        return Slice(*kids)
    if isinstance(e, DictLit):
        n = len(e.keys)
        return DictLit(tuple(kids[:n]), tuple(kids[n:]))
    return e


def walk_expr(e: Optional[Expr]) -> Iterator[Expr]:
    if e is None:
        return
    yield e
    for child in expr_children(e):
        yield from walk_expr(child)


def subexpressions(e: Expr, path: tuple = ()) -> Iterator[tuple[tuple, Expr]]:
    """Yield ``(path, node)`` for every node, outermost first."""
    yield path, e
    for i, child in enumerate(expr_children(e)):
        if child is not None:
            yield from subexpressions(child, path + (i,))


def get_at(e: Expr, path: tuple) -> Expr:
    for i in path:
        e = expr_children(e)[i]
    return e


def replace_at(e: Expr, path: tuple, new: Expr) -> Expr:
    if not path:
        return new
    kids = expr_children(e)
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(e, kids)


def map_expr(e: Optional[Expr], fn: Callable[[Expr], Optional[Expr]]) -> Optional[Expr]:
    """Rebuild ``e`` top-down; ``fn`` returns a replacement or ``None`` to descend."""
    if e is None:
        return None
    new = fn(e)
    if new is not None:
        return new
    kids = expr_children(e)
    if not kids:
        return e
    return with_children(e, [map_expr(k, fn) for k in kids])


@dataclass(frozen=True)
class ExprContext:
    """An expression with a single hole at ``path``."""

    expr: Expr
    path: tuple

    def plug(self, filler: Expr) -> Expr:
        return replace_at(self.expr, self.path, filler)

    @property
    def hole(self) -> Expr:
        return get_at(self.expr, self.path)


def stmt_exprs(s: Stmt) -> list[tuple[str, Expr]]:
    """Top-level expression slots of a statement (not descending into blocks)."""
    if isinstance(s, Assign):
        return [("value", s.value)]
    if isinstance(s, SubscriptAssign):
        return [("index", s.index), ("value", s.value)]
    if isinstance(s, (If, While)):
        return [("guard", s.guard)]
    if isinstance(s, For):
        return [("iterable", s.iterable)]
    if isinstance(s, Return):
        return [("value", s.value)] if s.value is not None else []
    if isinstance(s, ExprStmt):
        return [("call", s.call)]
    return []


def is_representable(value: object) -> bool:
    """Whether a value can be written back as a literal of the subset."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return True
    if isinstance(value, int):
        return abs(value) < 10**30
    if isinstance(value, float):
        return math.isfinite(value)
    return False


def fields_of(node) -> list[str]:
    return [f.name for f in fields(node) if f.name != "sid"]
