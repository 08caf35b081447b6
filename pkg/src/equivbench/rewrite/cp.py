"""Copy-propagation rewrite rules 1–5.

Every rule is a function ``(ctx, stmt) -> Firing | None`` that inspects the
statement with the current annotations and, if the rule applies there,
returns the rewritten program.
"""

from __future__ import annotations

from dataclasses import replace

from ..errors import RedefinedInScope
from ..scope import assigned_vars, substitute, substitute_expr, vars_of
from ..syntax import Assign, For, Var, While, walk_stmts
from .common import Context, Firing, contains_fundef, make_block, render, replace_block


def is_copy(s) -> bool:
    return isinstance(s, Assign) and isinstance(s.value, Var) and s.value.name != s.target


def cp1_erase(ctx: Context, s):
    """``x = y`` is dropped when x∼y already holds before it."""
    if not is_copy(s) or (s.target, s.value.name) not in ctx.cp.pre(s.sid):
        return None
    key, block, i = ctx.block_of(s.sid)
    new = replace_block(ctx.program, key, block[:i] + block[i + 1:])
    return Firing(new, render([s]), "ε")


def cp3_rotate(ctx: Context, s):
    """``y = e; S; x = y`` becomes ``x = e; S[x/y]; y = x`` when x∼y holds before and x ∉ Var(S).

    Only fired when it makes progress: either the rotated copy ``y = x`` is
    the tail of a loop that rule 4/5 can then (but not already) hoist, or ``y`` is dead after
    the copy (so the rotated copy is garbage).
    """
    if not is_copy(s):
        return None
    x, y = s.target, s.value.name
    key, block, j = ctx.block_of(s.sid)
    i = next((k for k in range(j - 1, -1, -1)
              if isinstance(block[k], Assign) and block[k].target == y), None)
    if i is None:
        return None
    first, between = block[i], block[i + 1:j]
    if (x, y) not in ctx.cp.pre(first.sid) or x in vars_of(between) or contains_fundef(between):
        return None
    try:
        moved = substitute(between, y, x)
    except RedefinedInScope:
        return None
    rotated = (Assign(x, first.value), *moved, Assign(y, Var(x)))
    new = replace_block(ctx.program, key, block[:i] + rotated + block[j + 1:])
    firing = Firing(new, render(block[i:j + 1]), render(rotated))

    owner = ctx.owner(key)
    # (If the loop can already be hoisted, rotating would only undo itself.)
    if j == len(block) - 1 and isinstance(owner, (While, For)) and _hoist(ctx, owner) is None:
        after = Context(new)
        if _hoist(after, after.program[owner.sid]) is not None:
            return firing
    live_after = ctx.live.after[s.sid]
    if y not in live_after and x in live_after:
        return firing
    return None


def _hoist(ctx: Context, s):
    if not isinstance(s, (While, For)) or not is_copy(s.body[-1]):
        return None
    tail = s.body[-1]
    x, y = tail.target, tail.value.name
    rest = s.body[:-1]
    if (x, y) not in ctx.cp.pre(s.sid) or contains_fundef(rest):
        return None
    if isinstance(s, While):
        if x in vars_of(rest):
            return None
        loop = replace(s, guard=substitute_expr(s.guard, x, y), body=make_block(rest))
    else:
        if x in vars_of(rest) - {s.var}:
            return None
        loop = replace(s, iterable=substitute_expr(s.iterable, x, y), body=make_block(rest))
    key, block, k = ctx.block_of(s.sid)
    new = replace_block(ctx.program, key, block[:k] + (loop, tail) + block[k + 1:])
    return Firing(new, render([s, tail]), render([loop, tail]), "CP4" if isinstance(s, While) else "CP5")


def cp4_hoist_while(ctx: Context, s):
    """``while e: (S; x = y)`` becomes ``(while e[y/x]: S); x = y``."""
    return _hoist(ctx, s) if isinstance(s, While) else None


def cp5_hoist_for(ctx: Context, s):
    """``for i in e: (S; x = y)`` becomes ``(for i in e[y/x]: S); x = y``."""
    return _hoist(ctx, s) if isinstance(s, For) else None


def _holds_throughout(ctx: Context, stmts, pair) -> bool:
    for t in walk_stmts(tuple(stmts)):
        a = ctx.cp[t.sid]
        if pair not in a.pre or pair not in a.post or (a.head is not None and pair not in a.head):
            return False
    return True


def cp2_commute(ctx: Context, s):
    """``x = y; S`` becomes ``S[y/x]; x = y``.

    Licensed when x∼y holds at every point of S and S re-binds neither
    variable (S must read x, so the substitution does something), or when
    x ∉ Var(S) and the statement after S repeats the copy, which rule 1 then
    erases.
    """
    if not is_copy(s):
        return None
    x, y = s.target, s.value.name
    key, block, j = ctx.block_of(s.sid)
    if j + 1 >= len(block) or y not in ctx.defined.before[s.sid]:
        return None
    nxt = block[j + 1]
    if contains_fundef([nxt]):
        return None
    used = vars_of([nxt])
    if x in used:
        if assigned_vars([nxt]) & {x, y} or not _holds_throughout(ctx, [nxt], (x, y)):
            return None
        moved = substitute(nxt, x, y)
    elif j + 2 < len(block) and block[j + 2] == s:
        moved = nxt
    else:
        return None
    new = replace_block(ctx.program, key, block[:j] + (moved, s) + block[j + 2:])
    return Firing(new, render([s, nxt]), render([moved, s]))


CP_RULES = [
    ("CP1", cp1_erase),
    ("CP3", cp3_rotate),
    ("CP4", cp4_hoist_while),
    ("CP5", cp5_hoist_for),
    ("CP2", cp2_commute),
]
