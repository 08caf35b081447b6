"""Identifier anonymization: functions become ``f1, f2, …``, variables ``a, b, …, v1, v2, …``."""

from __future__ import annotations

import string
from dataclasses import replace

from ..syntax import (
    Assign, Call, For, FunDef, Program, SubscriptAssign, Var, blocks_of, map_expr, stmt_exprs,
    walk_expr, walk_stmts,
)


def _first_occurrences(p: Program) -> tuple[list[str], list[str]]:
    """Function and variable names in order of first appearance."""
    fns = [s.name for s in walk_stmts(p.body) if isinstance(s, FunDef)]
    seen: dict[str, None] = {}

    def note(name):
        if name not in seen:
            seen[name] = None

    for s in walk_stmts(p.body):
        if isinstance(s, FunDef):
            for x in s.params:
                note(x)
        for _, e in stmt_exprs(s):
            for n in walk_expr(e):
                if isinstance(n, Var):
                    note(n.name)
        if isinstance(s, (Assign, SubscriptAssign)):
            note(s.target)
        elif isinstance(s, For):
            note(s.var)
    return fns, list(seen)


def _labels(count: int) -> list[str]:
    return (list(string.ascii_lowercase) + [f"v{i}" for i in range(1, count + 1)])[:count]


def obfuscation_map(p: Program, seed: int = 0) -> dict[str, str]:
    """The renaming ``obfuscate(p, seed)`` applies (functions and variables share one map).

    Labels follow order of first appearance, so the result does not depend on
    ``seed``; the parameter keeps the signature uniform with the other generators.
    """
    fns, variables = _first_occurrences(p)
    mapping = {f: f"f{i}" for i, f in enumerate(fns, 1)}
    mapping.update(zip(variables, _labels(len(variables))))
    return mapping


def rename(p: Program, mapping: dict[str, str]) -> Program:
    """Apply a capture-free renaming of functions and variables; builtins stay untouched."""

    def expr(e):
        def visit(n):
            if isinstance(n, Var):
                return Var(mapping.get(n.name, n.name))
            if isinstance(n, Call) and n.func in mapping:
                return Call(mapping[n.func], tuple(expr(a) for a in n.args))
            return None
        return map_expr(e, visit)

    def stmt(s):
        changes = {name: expr(e) for name, e in stmt_exprs(s)}
        for name, block in blocks_of(s):
            changes[name] = tuple(stmt(b) for b in block)
        if isinstance(s, (Assign, SubscriptAssign)):
            changes["target"] = mapping.get(s.target, s.target)
        elif isinstance(s, For):
            changes["var"] = mapping.get(s.var, s.var)
        elif isinstance(s, FunDef):
            changes["name"] = mapping.get(s.name, s.name)
            changes["params"] = tuple(mapping.get(x, x) for x in s.params)
        return replace(s, **changes)

    return Program(tuple(stmt(s) for s in p.body))


def obfuscate(p: Program, seed: int = 0) -> Program:
    return rename(p, obfuscation_map(p, seed))


def deobfuscate(p: Program, mapping: dict[str, str]) -> Program:
    return rename(p, {v: k for k, v in mapping.items()})
