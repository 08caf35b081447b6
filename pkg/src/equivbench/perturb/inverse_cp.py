"""Inverse copy propagation: make a program look less optimized by adding copies.

Each move undoes one forward rule (or garbage collection) and is
semantics-preserving by construction:

* ``copy``    — insert ``t = x`` (fresh t) and route the following reads of
  ``x`` in the same block through ``t`` (inverse of GC, rule 1 and rule 2);
* ``lift``    — ``S; x = y`` becomes ``x = y; S[x/y]`` (inverse of rule 2);
* ``sink``    — ``(loop: S); x = y`` becomes ``loop[x/y]: (S; x = y)`` when
  x∼y holds at the loop (inverse of rules 4/5);
* ``rotate``  — ``x = e; S; y = x`` becomes ``y = e; S[y/x]; x = y``
  (inverse of rule 3).
"""

from __future__ import annotations

import random
from dataclasses import replace

from ..errors import RedefinedInScope
from ..rewrite.common import Context, contains_fundef, make_block
from ..rewrite.cp import is_copy
from ..scope import assigned_vars, substitute, substitute_expr, vars_of
from ..syntax import Assign, For, FunDef, Program, Var, While
from .common import Move, run_moves, splice


def _rename_reads(stmts, x: str, t: str) -> tuple:
    """Route reads of ``x`` through ``t`` up to (and including the RHS of) the next re-binding."""
    out = []
    for k, s in enumerate(stmts):
        if isinstance(s, FunDef) or t in assigned_vars([s]):
            return tuple(out) + tuple(stmts[k:])
        if x in assigned_vars([s]):
            if isinstance(s, Assign):
                s = replace(s, value=substitute_expr(s.value, x, t))
            return tuple(out) + (s,) + tuple(stmts[k + 1:])
        out.append(substitute(s, x, t))
    return tuple(out)


def _copy_moves(ctx: Context, t: str, rng: random.Random) -> list[Move]:
    moves = []
    for key, block in ctx.blocks.items():
        for i, s in enumerate(block):
            if isinstance(s, FunDef):
                continue
            # after an assignment of x, or before a statement reading a defined x
            sites = []
            if isinstance(s, Assign):
                sites.append((s.target, i + 1))
            for x in sorted(vars_of([s]) & ctx.defined.before[s.sid]):
                if not (isinstance(s, Assign) and s.target == x and x not in vars_of(s.value)):
                    sites.append((x, i))
            for x, at in sites:
                def apply(key=key, block=block, x=x, at=at):
                    stop = rng.randint(at, len(block))
                    routed = _rename_reads(block[at:stop], x, t)
                    return splice(ctx, key, at, stop, (Assign(t, Var(x)),) + routed)
                moves.append(Move(f"copy {t} = {x}", apply))
    return moves


def _lift_moves(ctx: Context) -> list[Move]:
    moves = []
    for key, block in ctx.blocks.items():
        for j in range(1, len(block)):
            c, s = block[j], block[j - 1]
            if not is_copy(c) or isinstance(s, FunDef) or contains_fundef([s]):
                continue
            x, y = c.target, c.value.name
            if x in vars_of([s]) or y in assigned_vars([s]) or y not in ctx.defined.before[s.sid]:
                continue
            moves.append(Move(f"lift {x} = {y}", lambda key=key, j=j, c=c, s=s, x=x, y=y:
                              splice(ctx, key, j - 1, j + 1, (c, substitute(s, y, x)))))
    return moves


def _sink_moves(ctx: Context) -> list[Move]:
    moves = []
    for key, block in ctx.blocks.items():
        for k in range(len(block) - 1):
            loop, c = block[k], block[k + 1]
            if not isinstance(loop, (While, For)) or not is_copy(c) or contains_fundef(loop.body):
                continue
            x, y = c.target, c.value.name
            if (x, y) not in ctx.cp.pre(loop.sid) or x in vars_of(loop.body):
                continue
            body = make_block(loop.body + (c,))
            if isinstance(loop, While):
                new = replace(loop, guard=substitute_expr(loop.guard, y, x), body=body)
            else:
                if x == loop.var:
                    continue
                new = replace(loop, iterable=substitute_expr(loop.iterable, y, x), body=body)
            moves.append(Move(f"sink {x} = {y}", lambda key=key, k=k, new=new: splice(ctx, key, k, k + 2, (new,))))
    return moves


def _rotate_moves(ctx: Context) -> list[Move]:
    moves = []
    for key, block in ctx.blocks.items():
        for j, c in enumerate(block):
            if not is_copy(c):
                continue
            y, x = c.target, c.value.name
            i = next((k for k in range(j - 1, -1, -1)
                      if isinstance(block[k], Assign) and block[k].target == x), None)
            if i is None:
                continue
            between = block[i + 1:j]
            if (y in vars_of(between) or x in assigned_vars(between) or contains_fundef(between)):
                continue
            try:
                moved = substitute(between, x, y)
            except RedefinedInScope:
                continue
            rotated = (Assign(y, block[i].value), *moved, Assign(x, Var(y)))
            moves.append(Move(f"rotate {y} = {x}", lambda key=key, i=i, j=j, rotated=rotated:
                              splice(ctx, key, i, j + 1, rotated)))
    return moves


def _candidates(ctx: Context, t: str, rng: random.Random) -> list[Move]:
    return _copy_moves(ctx, t, rng) + _lift_moves(ctx) + _sink_moves(ctx) + _rotate_moves(ctx)


def perturb_cp_traced(p: Program, seed: int) -> tuple[Program, list[str]]:
    return run_moves(p, seed, _candidates, "copy-propagation")


def perturb_cp(p: Program, seed: int) -> Program:
    """Apply 2–6 seeded inverse copy-propagation moves.

    Raises :class:`NoOpportunity` when the program has no variable to copy.
    """
    return perturb_cp_traced(p, seed)[0]
