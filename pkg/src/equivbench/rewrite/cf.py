"""Constant-folding rewrite rules 1–4."""

from __future__ import annotations

from dataclasses import replace

from ..cf_analysis import AConst, abstract_eval, infer_kind, iteration_count, truthiness
from ..scope import expr_vars, vars_of
from ..syntax import (
    Assign, BinOp, Const, For, If, MethodCall, UnOp, Var, While, map_expr, stmt_exprs,
)
from .common import Context, Firing, is_safe, render, replace_block


def _memory_for(ctx: Context, s):
    # A while guard is re-evaluated at every iteration, so it must be folded
    # under the loop-head memory, not the entry memory.
    return ctx.cf.head(s.sid) if isinstance(s, While) else ctx.cf.pre(s.sid)


def fold_expr(e, mem, defined):
    """Replace maximal constant subexpressions of ``e`` by literals."""

    def visit(n):
        if isinstance(n, Const):
            return n
        if isinstance(n, MethodCall) and isinstance(n.obj, Var):
            # Keep the receiver a variable: methods may mutate it.
            args = tuple(map_expr(a, visit) for a in n.args)
            return MethodCall(n.obj, n.method, args)
        if expr_vars(n) <= defined:
            v = abstract_eval(n, mem)
            if isinstance(v, AConst):
                return Const(v.value)
        return None

    return map_expr(e, visit)


def _terms(e, sign: int, out: list) -> None:
    if isinstance(e, BinOp) and e.op in ("+", "-"):
        _terms(e.left, sign, out)
        _terms(e.right, sign if e.op == "+" else -sign, out)
    else:
        out.append((sign, e))


def reassociate(e, mem):
    """Combine the literals of an integer ``+``/``-`` chain: ``n - 2 + 1`` becomes ``n - 1``."""

    def visit(n):
        if not (isinstance(n, BinOp) and n.op in ("+", "-")):
            return None
        terms: list = []
        _terms(n, 1, terms)
        consts = [(sg, t) for sg, t in terms if isinstance(t, Const)]
        others = [(sg, reassociate(t, mem)) for sg, t in terms if not isinstance(t, Const)]
        if len(consts) < 2 or not others or any(infer_kind(t, mem) != "int" for _, t in terms):
            return None
        total = sum(sg * t.value for sg, t in consts)
        sign, acc = others[0]
        if sign < 0:
            if total:
                acc, total = BinOp("-", Const(total), acc), 0
            else:
                acc = UnOp("-", acc)
        for sg, t in others[1:]:
            acc = BinOp("+" if sg > 0 else "-", acc, t)
        if total > 0:
            acc = BinOp("+", acc, Const(total))
        elif total < 0:
            acc = BinOp("-", acc, Const(-total))
        return acc

    return map_expr(e, visit)


def cf1_fold(ctx: Context, s):
    """Fold every constant subexpression of one statement, then tidy integer chains."""
    slots = stmt_exprs(s)
    if not slots:
        return None
    mem = _memory_for(ctx, s)
    defined = set(ctx.defined.before[s.sid])
    changes = {}
    for name, e in slots:
        new = reassociate(fold_expr(e, mem, defined), mem)
        if new != e:
            changes[name] = new
    if not changes:
        return None
    folded = replace(s, **changes)
    key, block, i = ctx.block_of(s.sid)
    new = replace_block(ctx.program, key, block[:i] + (folded,) + block[i + 1:])
    return Firing(new, render([s]), render([folded]))


def cf2_erase(ctx: Context, s):
    """``x = E`` is dropped when E folds to k and x is already bound to k."""
    if not isinstance(s, Assign):
        return None
    pre = ctx.cf.pre(s.sid)
    v = abstract_eval(s.value, pre)
    defined = ctx.defined.before[s.sid]
    if not isinstance(v, AConst) or pre.get(s.target) != v or s.target not in defined:
        return None
    if not is_safe(s.value, defined):
        return None
    key, block, i = ctx.block_of(s.sid)
    new = replace_block(ctx.program, key, block[:i] + block[i + 1:])
    return Firing(new, render([s]), "ε")


def cf3b_collapse(ctx: Context, s):
    """``x = E; x = E'`` becomes ``x = E'`` when x ∉ Var(E')."""
    if not isinstance(s, Assign):
        return None
    key, block, i = ctx.block_of(s.sid)
    if i + 1 >= len(block):
        return None
    nxt = block[i + 1]
    if not (isinstance(nxt, Assign) and nxt.target == s.target) or s.target in expr_vars(nxt.value):
        return None
    if not is_safe(s.value, ctx.defined.before[s.sid]):
        return None
    new = replace_block(ctx.program, key, block[:i] + block[i + 1:])
    return Firing(new, render([s, nxt]), render([nxt]))


def cf3a_sink(ctx: Context, s):
    """``x = E; S`` becomes ``S; x = E`` when x ∉ Var(S).

    Only used to bring ``x = E`` next to the following assignment of ``x``,
    where rule 3b can then drop it.
    """
    if not isinstance(s, Assign):
        return None
    x = s.target
    key, block, i = ctx.block_of(s.sid)
    j = next((k for k in range(i + 1, len(block))
              if isinstance(block[k], Assign) and block[k].target == x), None)
    if j is None or j == i + 1:
        return None
    between = block[i + 1:j]
    if x in vars_of(between) or x in expr_vars(block[j].value):
        return None
    if not is_safe(s.value, ctx.defined.before[s.sid]):
        return None
    new = replace_block(ctx.program, key, block[:i] + between + (s,) + block[j:])
    return Firing(new, render(block[i:j]), render(between + (s,)))


def cf4_branch(ctx: Context, s):
    """Branch elimination for literal guards and empty loops."""
    if not isinstance(s, (If, While, For)):
        return None
    pre = ctx.cf.pre(s.sid)
    defined = ctx.defined.before[s.sid]
    key, block, i = ctx.block_of(s.sid)
    if isinstance(s, For):
        count = iteration_count(s.iterable, pre)
        if not (isinstance(count, AConst) and count.value <= 0) or not expr_vars(s.iterable) <= defined:
            return None
        replacement, rule = (), "CF4-for"
    else:
        if not expr_vars(s.guard) <= defined:
            return None
        g = truthiness(abstract_eval(s.guard, pre))
        if g is None:
            return None
        if isinstance(s, While):
            if g:
                return None
            replacement, rule = (), "CF4-while"
        else:
            replacement, rule = (s.then, "CF4-if-t") if g else (s.orelse, "CF4-if-f")
    new = replace_block(ctx.program, key, block[:i] + tuple(replacement) + block[i + 1:])
    return Firing(new, render([s]), render(replacement), rule)


CF_RULES = [
    ("CF4", cf4_branch),
    ("CF2", cf2_erase),
    ("CF1", cf1_fold),
    ("CF3b", cf3b_collapse),
    ("CF3a", cf3a_sink),
]
