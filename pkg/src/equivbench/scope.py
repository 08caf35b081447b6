"""Variable sets and capture-checked substitution."""

from __future__ import annotations

from dataclasses import replace

from .errors import RedefinedInScope
from .syntax import (
    EXPR_TYPES, Assign, For, FunDef, MethodCall, Program, SubscriptAssign, Var,
    blocks_of, map_expr, stmt_exprs, walk_expr, walk_stmts,
)

MUTATING_METHODS = frozenset({
    "append", "pop", "insert", "remove", "extend", "sort", "reverse", "clear",
    "update", "setdefault",
})


def _stmts_of(node) -> tuple:
    if isinstance(node, Program):
        return node.body
    if isinstance(node, (tuple, list)):
        return tuple(node)
    return (node,)


def expr_vars(e) -> set[str]:
    return {n.name for n in walk_expr(e) if isinstance(n, Var)}


def vars_of(node) -> set[str]:
    """Every identifier read or written in ``node``; function names are excluded."""
    if isinstance(node, EXPR_TYPES):
        return expr_vars(node)
    out: set[str] = set()
    for s in walk_stmts(_stmts_of(node)):
        if isinstance(s, (Assign, SubscriptAssign)):
            out.add(s.target)
        elif isinstance(s, For):
            out.add(s.var)
        elif isinstance(s, FunDef):
            out.update(s.params)
        for _, e in stmt_exprs(s):
            out |= expr_vars(e)
    return out


def assigned_vars(node) -> set[str]:
    """Identifiers re-bound (not merely mutated) in ``node``."""
    out: set[str] = set()
    for s in walk_stmts(_stmts_of(node)):
        if isinstance(s, Assign):
            out.add(s.target)
        elif isinstance(s, For):
            out.add(s.var)
        elif isinstance(s, FunDef):
            out.update(s.params)
    return out


def mutated_vars_expr(e) -> set[str]:
    return {
        n.obj.name for n in walk_expr(e)
        if isinstance(n, MethodCall) and n.method in MUTATING_METHODS and isinstance(n.obj, Var)
    }


def mutated_vars(node) -> set[str]:
    """Identifiers whose referent may be changed in place (subscript stores, mutating methods)."""
    out: set[str] = set()
    for s in walk_stmts(_stmts_of(node)):
        if isinstance(s, SubscriptAssign):
            out.add(s.target)
        for _, e in stmt_exprs(s):
            out |= mutated_vars_expr(e)
    return out


def read_vars(s) -> set[str]:
    """Identifiers read by the statement's own expressions (blocks excluded)."""
    out: set[str] = set()
    if isinstance(s, SubscriptAssign):
        out.add(s.target)
    for _, e in stmt_exprs(s):
        out |= expr_vars(e)
    return out


def _rename(e, x: str, y: str):
    return map_expr(e, lambda n: Var(y) if isinstance(n, Var) and n.name == x else None)


def substitute_expr(e, x: str, y: str):
    return e if x == y else _rename(e, x, y)


def _subst_stmt(s, x: str, y: str):
    changes = {name: _rename(e, x, y) for name, e in stmt_exprs(s)}
    if isinstance(s, SubscriptAssign) and s.target == x:
        changes["target"] = y
    for name, block in blocks_of(s):
        changes[name] = tuple(_subst_stmt(b, x, y) for b in block)
    return replace(s, **changes)


def substitute(node, x: str, y: str):
    """Replace every occurrence of variable ``x`` with ``y``.

    Accepts an expression, a statement or a statement sequence. Raises
    :class:`RedefinedInScope` if ``node`` re-binds ``x`` or ``y``.
    """
    if x == y:
        return node
    if isinstance(node, EXPR_TYPES):
        return _rename(node, x, y)
    stmts = _stmts_of(node)
    clash = assigned_vars(stmts) & {x, y}
    if clash:
        raise RedefinedInScope(f"{sorted(clash)[0]!r} is assigned in the substituted code")
    out = tuple(_subst_stmt(s, x, y) for s in stmts)
    if isinstance(node, Program):
        return Program(out)
    if isinstance(node, (tuple, list)):
        return out
    return out[0]
