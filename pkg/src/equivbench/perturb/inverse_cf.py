"""Inverse constant folding: hide literals behind constant-valued variables.

Moves (each semantics-preserving by construction, each undone by a forward
rule or by garbage collection):

* ``unfold``   — replace an integer literal k by ``a * c + b`` where c is
  known to hold the constant v and ``a * v + b = k`` (inverse of rule 1);
* ``define``   — insert a fresh ``t = v`` and unfold a literal through it;
* ``restate``  — re-assign ``c = v`` where c already holds v (inverse of rule 2);
* ``shadow``   — insert a dead ``x = k`` just before ``x = E'`` (inverse of rule 3b);
* ``hoist``    — ``S; x = E`` becomes ``x = E; S`` for a constant E (inverse of rule 3a);
* ``guard``    — wrap a statement in an ``if`` whose guard is provably true (inverse of rule 4).
"""

from __future__ import annotations

import random
from dataclasses import replace

from ..errors import NoOpportunity
from ..cf_analysis import AConst, abstract_eval
from ..ops import is_int
from ..rewrite.common import Context, contains_fundef, is_safe
from ..scope import assigned_vars, expr_vars, mutated_vars, vars_of
from ..syntax import (
    Assign, BinOp, Const, FunDef, If, Program, Slice, Var, While, get_at, replace_at, stmt_exprs,
    subexpressions, walk_stmts,
)
from .common import Move, run_moves, splice


def _memory(ctx: Context, s):
    return ctx.cf.head(s.sid) if isinstance(s, While) else ctx.cf.pre(s.sid)


def _constants(ctx: Context, s, head: bool = True) -> list[tuple[str, int]]:
    """Variables that certainly hold an integer constant when ``s``'s expressions are evaluated
    (``head=False``: just before ``s`` starts)."""
    defined = ctx.defined.before[s.sid]
    out = []
    for name, v in (_memory(ctx, s) if head else ctx.cf.pre(s.sid)).bindings:
        if isinstance(v, AConst) and is_int(v.value) and name in defined and abs(v.value) < 10**6:
            out.append((name, v.value))
    return out


def unfolded(k: int, c: str, v: int, rng: random.Random):
    """An expression over ``c`` that equals ``k`` whenever ``c == v``."""
    a = rng.choice((1, 1, 2, 3))
    b = k - a * v
    e = Var(c) if a == 1 else BinOp("*", Const(a), Var(c))
    if b > 0:
        return BinOp("+", e, Const(b))
    if b < 0:
        return BinOp("-", e, Const(-b))
    return e


def _literal_sites(s) -> list[tuple[str, tuple]]:
    """``(slot, path)`` of every plain integer literal among the statement's expressions."""
    out = []
    for slot, e in stmt_exprs(s):
        parents = {}
        for path, node in subexpressions(e):
            parents[path] = node
            if isinstance(node, Const) and is_int(node.value) and abs(node.value) < 10**6:
                parent = parents.get(path[:-1]) if path else None
                if isinstance(parent, Slice):
                    continue
                if isinstance(parent, BinOp) and parent.op == "**" and path[-1] == 1:
                    continue  # keep exponents literal
                out.append((slot, path))
    return out


def _with_literal(s, slot: str, path: tuple, new):
    return replace(s, **{slot: replace_at(getattr(s, slot), path, new)})


def _literal_value(s, slot, path) -> int:
    return get_at(getattr(s, slot), path).value


def _statements(ctx: Context):
    for key, block in ctx.blocks.items():
        for i, s in enumerate(block):
            if not isinstance(s, FunDef):
                yield key, block, i, s


def _candidates(ctx: Context, t: str, rng: random.Random) -> list[Move]:
    moves: list[Move] = []
    program_literals = [
        _literal_value(s, slot, path)
        for s in ctx.program.statements() for slot, path in _literal_sites(s)
    ]
    for key, block, i, s in _statements(ctx):
        consts = _constants(ctx, s)
        entry_consts = _constants(ctx, s, head=False)
        sites = _literal_sites(s)
        for slot, path in sites:
            k = _literal_value(s, slot, path)
            for c, v in consts:
                moves.append(Move(f"unfold {k} via {c}", lambda key=key, i=i, s=s, slot=slot, path=path, k=k, c=c, v=v:
                                  splice(ctx, key, i, i + 1, (_with_literal(s, slot, path, unfolded(k, c, v, rng)),))))

            def define(key=key, i=i, s=s, slot=slot, path=path, k=k):
                v = rng.randint(1, 5)
                return splice(ctx, key, i, i + 1,
                              (Assign(t, Const(v)), _with_literal(s, slot, path, unfolded(k, t, v, rng))))
            moves.append(Move(f"define {t}", define))
        for c, v in entry_consts:
            moves.append(Move(f"restate {c}", lambda key=key, i=i, c=c, v=v:
                              splice(ctx, key, i, i, (Assign(c, Const(v)),))))
        if isinstance(s, Assign) and s.target not in expr_vars(s.value) and program_literals:
            k = program_literals[rng.randrange(len(program_literals))]
            moves.append(Move(f"shadow {s.target}", lambda key=key, i=i, x=s.target, k=k:
                              splice(ctx, key, i, i, (Assign(x, Const(k)),))))
        if i > 0 and isinstance(s, Assign):
            prev = block[i - 1]
            value = abstract_eval(s.value, ctx.cf.pre(s.sid))
            touched = assigned_vars([prev]) | mutated_vars([prev])
            if (isinstance(value, AConst) and not contains_fundef([prev])
                    and s.target not in vars_of([prev]) and not expr_vars(s.value) & touched
                    and is_safe(s.value, ctx.defined.before[prev.sid])):
                moves.append(Move(f"hoist {s.target}", lambda key=key, i=i, s=s, prev=prev:
                                  splice(ctx, key, i - 1, i + 1, (s, prev))))
        if entry_consts or program_literals:
            moves.append(Move("guard", lambda key=key, i=i, s=s, consts=entry_consts:
                              splice(ctx, key, i, i + 1, (If(_true_guard(consts, program_literals, rng), (s,)),))))
    return moves


def _true_guard(consts, literals, rng: random.Random):
    if consts:
        c, v = consts[rng.randrange(len(consts))]
        op, k = rng.choice((("==", v), (">", v - 1), ("<", v + 1), (">=", v), ("<=", v)))
        return BinOp(op, Var(c), Const(k))
    k = literals[rng.randrange(len(literals))]
    return BinOp(">", Const(k + 1), Const(k)) if rng.random() < 0.5 else BinOp("<", Const(k), Const(k + 1))


def has_cf_opportunity(p: Program) -> bool:
    return any(_literal_sites(s) for s in walk_stmts(p.body))


def perturb_cf_traced(p: Program, seed: int) -> tuple[Program, list[str]]:
    if not has_cf_opportunity(p):
        raise NoOpportunity("no integer literal to unfold")
    return run_moves(p, seed, _candidates, "constant-folding")


def perturb_cf(p: Program, seed: int) -> Program:
    """Apply 2–6 seeded inverse constant-folding moves."""
    return perturb_cf_traced(p, seed)[0]
