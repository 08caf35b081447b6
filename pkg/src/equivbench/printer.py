"""Deterministic pretty-printer producing runnable Python."""

from __future__ import annotations

from .syntax import (
    Assign, BinOp, Call, Const, DictLit, ExprStmt, For, FunDef, If, ListLit,
    MethodCall, Pass, Program, Return, Slice, Subscript, SubscriptAssign, UnOp,
    Var, While, walk_expr, walk_stmts, stmt_exprs,
)

INDENT = "    "

_PREC = {
    "or": 1, "and": 2,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4, "in": 4, "not in": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "//": 6, "%": 6,
    "**": 8,
}
_NOT, _UNARY, _ATOM = 3, 7, 9


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, UnOp):
        return _NOT if e.op == "not" else _UNARY
    if isinstance(e, Const) and type(e.value) in (int, float) and (e.value < 0 or repr(e.value).startswith("-")):
        return _UNARY
    return _ATOM


def _wrap(e, need: bool) -> str:
    text = print_expr(e)
    return f"({text})" if need else text


def print_expr(e) -> str:
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        lp, rp = _prec(e.left), _prec(e.right)
        if p == 4:
            left, right = _wrap(e.left, lp <= p), _wrap(e.right, rp <= p)
        elif e.op == "**":
            left, right = _wrap(e.left, lp <= p), _wrap(e.right, rp < _UNARY)
        else:
            left, right = _wrap(e.left, lp < p), _wrap(e.right, rp <= p)
        return f"{left} {e.op} {right}"
    if isinstance(e, UnOp):
        if e.op == "not":
            return f"not {_wrap(e.operand, _prec(e.operand) < _NOT)}"
        return f"-{_wrap(e.operand, _prec(e.operand) < _UNARY)}"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, MethodCall):
        obj = e.obj
        need = _prec(obj) < _ATOM or (isinstance(obj, Const) and type(obj.value) in (int, float))
        return f"{_wrap(obj, need)}.{e.method}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, Subscript):
        return f"{_wrap(e.value, _prec(e.value) < _ATOM)}[{print_expr(e.index)}]"
    if isinstance(e, Slice):
        parts = ["" if x is None else print_expr(x) for x in (e.lower, e.upper)]
        text = ":".join(parts)
        if e.step is not None:
            text += ":" + print_expr(e.step)
        return text
    if isinstance(e, ListLit):
        return "[" + ", ".join(print_expr(x) for x in e.items) + "]"
    if isinstance(e, DictLit):
        return "{" + ", ".join(f"{print_expr(k)}: {print_expr(v)}" for k, v in zip(e.keys, e.values)) + "}"
    raise TypeError(f"not an expression: {e!r}")


def _lines(stmts, depth: int) -> list[str]:
    pad = INDENT * depth
    if not stmts:
        return [pad + "pass"]
    out: list[str] = []
    for s in stmts:
        out.extend(_stmt_lines(s, depth))
    return out


def _stmt_lines(s, depth: int) -> list[str]:
    pad = INDENT * depth
    if isinstance(s, Assign):
        return [f"{pad}{s.target} = {print_expr(s.value)}"]
    if isinstance(s, SubscriptAssign):
        return [f"{pad}{s.target}[{print_expr(s.index)}] = {print_expr(s.value)}"]
    if isinstance(s, If):
        lines = [f"{pad}if {print_expr(s.guard)}:", *_lines(s.then, depth + 1)]
        orelse = s.orelse
        while len(orelse) == 1 and isinstance(orelse[0], If):
            inner = orelse[0]
            lines += [f"{pad}elif {print_expr(inner.guard)}:", *_lines(inner.then, depth + 1)]
            orelse = inner.orelse
        if orelse:
            lines += [f"{pad}else:", *_lines(orelse, depth + 1)]
        return lines
    if isinstance(s, While):
        return [f"{pad}while {print_expr(s.guard)}:", *_lines(s.body, depth + 1)]
    if isinstance(s, For):
        return [f"{pad}for {s.var} in {print_expr(s.iterable)}:", *_lines(s.body, depth + 1)]
    if isinstance(s, FunDef):
        return [f"{pad}def {s.name}({', '.join(s.params)}):", *_lines(s.body, depth + 1)]
    if isinstance(s, Return):
        return [f"{pad}return" if s.value is None else f"{pad}return {print_expr(s.value)}"]
    if isinstance(s, ExprStmt):
        return [pad + print_expr(s.call)]
    if isinstance(s, Pass):
        return [pad + "pass"]
    raise TypeError(f"not a statement: {s!r}")


def _uses_math(stmts) -> bool:
    for s in walk_stmts(stmts):
        for _, e in stmt_exprs(s):
            if any(isinstance(n, Call) and n.func.startswith("math.") for n in walk_expr(e)):
                return True
    return False


def print_stmts(stmts, depth: int = 0) -> str:
    return "\n".join(_lines(tuple(stmts), depth)) + "\n"


def print_program(p: Program) -> str:
    """Render ``p`` as Python source; an empty program prints as ``pass``."""
    text = print_stmts(p.body)
    if _uses_math(p.body):
        text = "import math\n\n" + text
    return text


def print_stmt(s) -> str:
    """One-line rendering of a statement header, used in dumps and traces."""
    return _stmt_lines(s, 0)[0]
