"""Dead-assignment removal ("garbage collection")."""

from __future__ import annotations

from ..syntax import Assign
from .common import Context, Firing, is_safe, render, replace_block


def gc_remove(ctx: Context, s):
    """Drop ``x = e`` when x is dead afterwards and evaluating e has no observable effect."""
    if not isinstance(s, Assign) or s.target in ctx.live.after[s.sid]:
        return None
    if not is_safe(s.value, ctx.defined.before[s.sid]):
        return None
    key, block, i = ctx.block_of(s.sid)
    new = replace_block(ctx.program, key, block[:i] + block[i + 1:])
    return Firing(new, render([s]), "ε")


GC_RULES = [("GC", gc_remove)]
