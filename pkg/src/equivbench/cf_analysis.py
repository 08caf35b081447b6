"""Constant-folding annotations.

Abstract values are a known literal (:class:`AConst`), unknown (:class:`Top`)
or an error (:data:`ERR`). An :class:`AbstractMemory` maps variables to
abstract values; a variable without a binding has no value yet, and reading
it is an error.

``Top`` carries an optional ``kind``: ``"int"`` when the unknown value is
certainly a Python ``int``. The rewrite rules use it to reassociate integer
additions safely (float addition is not associative).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .fixpoint import AnnotationMap, dump, run_rounds
from .ops import BUILTINS, FOLDABLE, MAX_FOLD_EXPONENT, apply_binop, apply_unop, is_int
from .scope import expr_vars, mutated_vars_expr, vars_of
from .syntax import (
    Assign, BinOp, Call, Const, DictLit, ExprStmt, For, FunDef, If, ListLit,
    MethodCall, Program, Return, Slice, Subscript, SubscriptAssign, UnOp, Var,
    While, const_key, is_representable, stmt_exprs, walk_expr,
)

CfAnnotationMap = AnnotationMap


@dataclass(frozen=True, eq=False)
class AConst:
    value: object

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AConst) and const_key(self.value) == const_key(other.value)

    def __hash__(self) -> int:
        return hash(("AConst", const_key(self.value)))

    def render(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Top:
    kind: Optional[str] = None

    def render(self) -> str:
        return "⊤"


@dataclass(frozen=True)
class _Err:
    def render(self) -> str:
        return "?"


TOP = Top()
TOP_INT = Top("int")
ERR = _Err()
AbstractValue = Union[AConst, Top, _Err]


def kind_of(v: AbstractValue) -> Optional[str]:
    if isinstance(v, Top):
        return v.kind
    if isinstance(v, AConst) and is_int(v.value):
        return "int"
    return None


def join_value(m1: AbstractValue, m2: AbstractValue) -> AbstractValue:
    if m1 == m2:
        return m1
    if m1 is ERR or m2 is ERR:
        return ERR
    return TOP_INT if kind_of(m1) == kind_of(m2) == "int" else TOP


@dataclass(frozen=True)
class AbstractMemory:
    bindings: tuple = ()  # sorted (name, value) pairs

    @classmethod
    def of(cls, mapping) -> "AbstractMemory":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        return cls(tuple(sorted(items, key=lambda kv: kv[0])))

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def get(self, x: str) -> Optional[AbstractValue]:
        for name, v in self.bindings:
            if name == x:
                return v
        return None

    def __contains__(self, x: str) -> bool:
        return self.get(x) is not None

    def __len__(self) -> int:
        return len(self.bindings)

    def set(self, x: str, v: AbstractValue) -> "AbstractMemory":
        d = self.as_dict()
        d[x] = v
        return AbstractMemory.of(d)

    def remove(self, x: str) -> "AbstractMemory":
        return AbstractMemory(tuple(kv for kv in self.bindings if kv[0] != x))

    def render(self) -> str:
        return "{" + ", ".join(f"{k}:{v.render()}" for k, v in self.bindings) + "}"

    def __repr__(self) -> str:
        return f"AbstractMemory({self.render()})"


EMPTY = AbstractMemory()


def memory(**kwargs) -> AbstractMemory:
    """Convenience constructor: plain values become :class:`AConst`."""
    return AbstractMemory.of({
        k: v if isinstance(v, (AConst, Top, _Err)) else AConst(v) for k, v in kwargs.items()
    })


def join_memory(c1: AbstractMemory, c2: AbstractMemory) -> AbstractMemory:
    d1, d2 = c1.as_dict(), c2.as_dict()
    out = dict(d1)
    for x, v in d2.items():
        out[x] = join_value(d1[x], v) if x in d1 else v
    return AbstractMemory.of(out)


# -- abstract evaluation ----------------------------------------------------

def _foldable_shape(e) -> bool:
    """Whether ``e`` can be evaluated at analysis time once its variables are constants."""
    for n in walk_expr(e):
        if isinstance(n, (MethodCall, ListLit, DictLit, Slice)):
            return False
        if isinstance(n, Call) and n.func not in FOLDABLE:
            return False
    return True


def infer_kind(e, c: AbstractMemory) -> Optional[str]:
    """``"int"`` when ``e`` certainly evaluates to an int (or raises)."""
    if isinstance(e, Const):
        return "int" if is_int(e.value) else None
    if isinstance(e, Var):
        v = c.get(e.name)
        return kind_of(v) if v is not None else None
    if isinstance(e, BinOp) and e.op in ("+", "-", "*", "//", "%"):
        return "int" if infer_kind(e.left, c) == infer_kind(e.right, c) == "int" else None
    if isinstance(e, UnOp) and e.op == "-":
        return infer_kind(e.operand, c)
    if isinstance(e, Call):
        if e.func in ("int", "len"):
            return "int"
        if e.func == "abs" and len(e.args) == 1:
            return infer_kind(e.args[0], c)
        if e.func in ("min", "max") and len(e.args) >= 2:
            return "int" if all(infer_kind(a, c) == "int" for a in e.args) else None
    return None


class _Fault(Exception):
    pass


def concrete_eval(e, env: dict):
    """Evaluate a foldable expression under a constant environment; faults raise ``_Fault``."""
    try:
        return _ev(e, env)
    except _Fault:
        raise
    except (ArithmeticError, TypeError, ValueError, IndexError, KeyError) as exc:
        raise _Fault(str(exc)) from None


def _ev(e, env):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, BinOp):
        left = _ev(e.left, env)
        if e.op == "and":
            return _ev(e.right, env) if left else left
        if e.op == "or":
            return left if left else _ev(e.right, env)
        right = _ev(e.right, env)
        if e.op == "**" and is_int(right) and abs(right) > MAX_FOLD_EXPONENT:
            raise _TooLarge
        return apply_binop(e.op, left, right)
    if isinstance(e, UnOp):
        return apply_unop(e.op, _ev(e.operand, env))
    if isinstance(e, Call):
        return BUILTINS[e.func](*(_ev(a, env) for a in e.args))
    if isinstance(e, Subscript):
        return _ev(e.value, env)[_ev(e.index, env)]
    raise TypeError(f"cannot fold {type(e).__name__}")


class _TooLarge(Exception):
    pass


def abstract_eval(e, c: AbstractMemory) -> AbstractValue:
    """Evaluate ``e`` in the abstract memory ``c``."""
    names = expr_vars(e)
    values = {x: c.get(x) for x in names}
    if any(v is None or v is ERR for v in values.values()):
        return ERR
    top = Top(infer_kind(e, c))
    if any(isinstance(v, Top) for v in values.values()) or not _foldable_shape(e):
        return top
    try:
        result = concrete_eval(e, {x: v.value for x, v in values.items()})
    except _Fault:
        return ERR
    except _TooLarge:
        return top
    if not is_representable(result):
        return top
    return AConst(result)


def truthiness(v: AbstractValue) -> Optional[bool]:
    return bool(v.value) if isinstance(v, AConst) else None


def iteration_count(e, c: AbstractMemory) -> AbstractValue:
    """Abstract length of a for-loop iterable."""
    if isinstance(e, ListLit):
        return AConst(len(e.items))
    if isinstance(e, Call) and e.func == "range" and 1 <= len(e.args) <= 3:
        args = [abstract_eval(a, c) for a in e.args]
        if any(a is ERR for a in args):
            return ERR
        if all(isinstance(a, AConst) and is_int(a.value) for a in args):
            try:
                return AConst(len(range(*(a.value for a in args))))
            except ValueError:
                return ERR
        return TOP_INT
    v = abstract_eval(e, c)
    if isinstance(v, AConst) and isinstance(v.value, str):
        return AConst(len(v.value))
    return v if v is ERR else TOP_INT


# -- judgments ---------------------------------------------------------------

def _demote(c: AbstractMemory, names) -> AbstractMemory:
    for x in sorted(names):
        v = c.get(x)
        if v is not None and v is not ERR:
            c = c.set(x, TOP)
    return c


def _mutations(s) -> set[str]:
    out = {s.target} if isinstance(s, SubscriptAssign) else set()
    for _, e in stmt_exprs(s):
        out |= mutated_vars_expr(e)
    return out


def judge_cf(pre: AbstractMemory, s, acc: Optional[AnnotationMap] = None) -> AbstractMemory:
    """Post-memory of ``s`` from ``pre``; records all sub-annotations in ``acc``."""
    if acc is None:
        acc = AnnotationMap()
    post, head = pre, None
    if isinstance(s, Assign):
        value = abstract_eval(s.value, pre)
        post = _demote(pre, _mutations(s) - {s.target}).remove(s.target).set(s.target, value)
    elif isinstance(s, If):
        g = truthiness(abstract_eval(s.guard, pre))
        then_post = _judge_block(pre, s.then, acc)
        else_post = _judge_block(pre, s.orelse, acc)
        post = then_post if g is True else else_post if g is False else join_memory(then_post, else_post)
    elif isinstance(s, While):
        head = join_memory(pre, acc.loops.get(s.sid, EMPTY))
        body_post = _judge_block(head, s.body, acc)
        acc.loops[s.sid] = join_memory(acc.loops.get(s.sid, EMPTY), body_post)
        post = pre if truthiness(abstract_eval(s.guard, pre)) is False else head
    elif isinstance(s, For):
        var_kind = TOP_INT if isinstance(s.iterable, Call) and s.iterable.func == "range" else TOP
        head = join_memory(join_memory(pre, acc.loops.get(s.sid, EMPTY)), AbstractMemory.of({s.var: var_kind}))
        body_post = _judge_block(head, s.body, acc)
        acc.loops[s.sid] = join_memory(acc.loops.get(s.sid, EMPTY), body_post)
        count = iteration_count(s.iterable, pre)
        empty = isinstance(count, AConst) and count.value <= 0
        post = pre if empty else head
    elif isinstance(s, FunDef):
        local = {x: TOP for x in sorted(set(s.params) | vars_of(s.body))}
        _judge_block(AbstractMemory.of(local), s.body, acc)
        post = pre
    elif isinstance(s, (SubscriptAssign, ExprStmt, Return)):
        post = _demote(pre, _mutations(s))
    acc.record(s.sid, pre, post, head)
    return post


def _judge_block(pre: AbstractMemory, stmts, acc: AnnotationMap) -> AbstractMemory:
    for s in stmts:
        pre = judge_cf(pre, s, acc)
    return pre


def iteration_limit(p: Program) -> int:
    n_vars = len(vars_of(p))
    loops = sum(isinstance(s, (While, For)) for s in p.statements())
    return 3 * n_vars * (loops + 1) + len(p) + 2


# Top and Err are peers: a guard-dependent division may fault while an operand is
# still the constant 0 and only become Top once the operand widens.
_RANK = {type(None): 0, AConst: 1, Top: 2, _Err: 2}


def _check_ascent(before: AnnotationMap, after: AnnotationMap) -> None:
    for sid, a in after.entries.items():
        b = before.entries[sid]
        for old, new in ((b.pre, a.pre), (b.post, a.post)):
            for x, v in old.bindings:
                w = new.get(x)
                if w is None or _RANK[type(w)] < _RANK[type(v)] or (
                    isinstance(v, AConst) and isinstance(w, AConst) and v != w
                ):
                    raise AssertionError(f"binding of {x!r} at statement {sid} moved backwards")


def infer_cf_history(p: Program, check_monotone: bool = False) -> list[AnnotationMap]:
    return run_rounds(
        p,
        lambda acc: _judge_block(EMPTY, p.body, acc),
        lambda: EMPTY,
        iteration_limit(p),
        _check_ascent if check_monotone else None,
    )


def infer_cf(p: Program, check_monotone: bool = False) -> AnnotationMap:
    return infer_cf_history(p, check_monotone)[-1]


def dump_cf(p: Program, amap: Optional[AnnotationMap] = None) -> str:
    return dump(p, amap if amap is not None else infer_cf(p), AbstractMemory.render)


def constant_bindings(c: AbstractMemory) -> dict:
    return {x: v.value for x, v in c.bindings if isinstance(v, AConst)}


__all__ = [
    "AConst", "AbstractMemory", "CfAnnotationMap", "ERR", "TOP", "TOP_INT", "Top",
    "abstract_eval", "dump_cf", "infer_cf", "infer_cf_history", "join_memory", "join_value",
    "judge_cf", "memory", "truthiness",
]
