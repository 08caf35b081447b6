"""Helpers shared by the perturbation generators."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Optional

from ..errors import NoOpportunity
from ..rewrite.common import Context, replace_block
from ..scope import vars_of
from ..syntax import Call, FunDef, Program, walk_expr, walk_stmts, stmt_exprs

MIN_DEPTH, MAX_DEPTH = 2, 6


def fresh_names(p: Program, prefix: str = "t"):
    """Endless supply of ``t1, t2, …`` not already used in ``p``."""
    used = vars_of(p) | {f.name for f in walk_stmts(p.body) if isinstance(f, FunDef)}
    used |= {n.func for s in walk_stmts(p.body) for _, e in stmt_exprs(s)
             for n in walk_expr(e) if isinstance(n, Call)}
    for i in itertools.count(1):
        name = f"{prefix}{i}"
        if name not in used:
            yield name


def splice(ctx: Context, key, start: int, stop: int, new) -> Program:
    """Replace ``block[start:stop]`` of block ``key`` by ``new``."""
    block = ctx.blocks[key]
    return replace_block(ctx.program, key, block[:start] + tuple(new) + block[stop:])


@dataclass(frozen=True)
class Move:
    """One applicable inverse rewrite: a label for the trace and a thunk producing the program."""

    label: str
    apply: Callable[[], Program]


def run_moves(p: Program, seed: int, candidates: Callable[[Context, str, random.Random], list],
              what: str) -> tuple[Program, list[str]]:
    """Apply 2–6 seeded moves, re-analysing after each; returns the program and move labels."""
    rng = random.Random(seed)
    depth = rng.randint(MIN_DEPTH, MAX_DEPTH)
    names = fresh_names(p)
    current, log = p, []
    for _ in range(depth):
        moves = candidates(Context(current), next(names), rng)
        if not moves:
            break
        # Pick the kind of move first so frequent kinds do not crowd out rare ones.
        kinds = sorted({m.label.split()[0] for m in moves})
        kind = kinds[rng.randrange(len(kinds))]
        moves = [m for m in moves if m.label.split()[0] == kind]
        move = moves[rng.randrange(len(moves))]
        current = move.apply()
        log.append(move.label)
    if not log:
        raise NoOpportunity(f"no {what} site in the program")
    return current, log


def pick(rng: random.Random, items: list) -> Optional[object]:
    return items[rng.randrange(len(items))] if items else None
