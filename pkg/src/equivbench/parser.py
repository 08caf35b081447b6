"""Parse source text into the subset syntax tree.

The host ``ast`` module does the tokenizing and grammar work; this module
only maps its nodes onto :mod:`equivbench.syntax` and rejects everything
outside the subset.
"""

from __future__ import annotations

import ast
import math

from .errors import InvalidSyntax, UnsupportedConstruct
from .syntax import (
    Assign, BinOp, Call, Const, DictLit, ExprStmt, For, FunDef, If, ListLit,
    MethodCall, Pass, Program, Return, Slice, Subscript, SubscriptAssign, UnOp,
    Var, While, stmt_exprs, walk_expr, walk_stmts,
)

_BINOPS = {
    ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/",
    ast.FloorDiv: "//", ast.Mod: "%", ast.Pow: "**",
}
_CMPOPS = {
    ast.Eq: "==", ast.NotEq: "!=", ast.Lt: "<", ast.LtE: "<=",
    ast.Gt: ">", ast.GtE: ">=", ast.In: "in", ast.NotIn: "not in",
}
_MODULES = {"math"}
_MATH_CONSTANTS = {"pi": math.pi, "e": math.e}


def _unsupported(node: ast.AST, what: str) -> UnsupportedConstruct:
    return UnsupportedConstruct(getattr(node, "lineno", 0), what, getattr(node, "col_offset", 0))


class _Converter:
    def __init__(self) -> None:
        self.depth = 0

    # statements

    def block(self, stmts: list) -> tuple:
        out = []
        for s in stmts:
            converted = self.stmt(s)
            if converted is not None:
                out.append(converted)
        return tuple(out)

    def stmt(self, s: ast.stmt):
        if isinstance(s, ast.Assign):
            if len(s.targets) != 1:
                raise _unsupported(s, "chained assignment")
            return self._assign(s, s.targets[0], self.expr(s.value))
        if isinstance(s, ast.AugAssign):
            op = _BINOPS.get(type(s.op))
            if op is None:
                raise _unsupported(s, type(s.op).__name__)
            target = s.target
            if isinstance(target, ast.Name):
                current = Var(target.id)
            elif isinstance(target, ast.Subscript):
                current = self.expr(target)
            else:
                raise _unsupported(s, "augmented assignment target")
            return self._assign(s, target, BinOp(op, current, self.expr(s.value)))
        if isinstance(s, ast.If):
            return If(self.expr(s.test), self._body(s.body, s), self.block(s.orelse))
        if isinstance(s, ast.While):
            if s.orelse:
                raise _unsupported(s, "while-else")
            return While(self.expr(s.test), self._body(s.body, s))
        if isinstance(s, ast.For):
            if s.orelse:
                raise _unsupported(s, "for-else")
            if not isinstance(s.target, ast.Name):
                raise _unsupported(s, "for-loop target pattern")
            return For(s.target.id, self.expr(s.iter), self._body(s.body, s))
        if isinstance(s, ast.FunctionDef):
            return self._fundef(s)
        if isinstance(s, ast.Return):
            return Return(None if s.value is None else self.expr(s.value))
        if isinstance(s, ast.Expr):
            if isinstance(s.value, ast.Constant) and isinstance(s.value.value, str):
                return None  # docstring
            if not isinstance(s.value, ast.Call):
                raise _unsupported(s, "expression statement that is not a call")
            return ExprStmt(self.expr(s.value))
        if isinstance(s, ast.Pass):
            return Pass()
        if isinstance(s, ast.Import):
            if self.depth == 0 and all(a.name in _MODULES and a.asname is None for a in s.names):
                return None
            raise _unsupported(s, "import")
        raise _unsupported(s, type(s).__name__)

    def _body(self, stmts: list, owner: ast.AST) -> tuple:
        # Docstring-only bodies still need a statement.
        body = self.block(stmts)
        return body if body else (Pass(),)

    def _assign(self, s: ast.stmt, target: ast.expr, value):
        if isinstance(target, ast.Name):
            return Assign(target.id, value)
        if isinstance(target, ast.Subscript):
            if not isinstance(target.value, ast.Name):
                raise _unsupported(s, "nested subscript assignment")
            return SubscriptAssign(target.value.id, self._index(target.slice), value)
        if isinstance(target, (ast.Tuple, ast.List)):
            raise _unsupported(s, "tuple assignment")
        raise _unsupported(s, "assignment target")

    def _fundef(self, s: ast.FunctionDef) -> FunDef:
        if self.depth > 0:
            raise _unsupported(s, "nested function")
        a = s.args
        if s.decorator_list or a.vararg or a.kwarg or a.kwonlyargs or a.defaults or a.posonlyargs:
            raise _unsupported(s, "function signature")
        if s.returns is not None or any(p.annotation is not None for p in a.args):
            raise _unsupported(s, "annotation")
        self.depth += 1
        try:
            body = self._body(s.body, s)
        finally:
            self.depth -= 1
        return FunDef(s.name, tuple(p.arg for p in a.args), body)

    # expressions

    def expr(self, e: ast.expr):
        if isinstance(e, ast.Constant):
            v = e.value
            if v is None or isinstance(v, (bool, int, float, str)):
                return Const(v)
            raise _unsupported(e, f"{type(v).__name__} literal")
        if isinstance(e, ast.Name):
            return Var(e.id)
        if isinstance(e, ast.BinOp):
            op = _BINOPS.get(type(e.op))
            if op is None:
                raise _unsupported(e, type(e.op).__name__)
            return BinOp(op, self.expr(e.left), self.expr(e.right))
        if isinstance(e, ast.UnaryOp):
            if isinstance(e.op, ast.USub):
                # A minus sign directly on a numeric literal is part of the literal.
                if isinstance(e.operand, ast.Constant) and type(e.operand.value) in (int, float):
                    return Const(-e.operand.value)
                return UnOp("-", self.expr(e.operand))
            if isinstance(e.op, ast.Not):
                return UnOp("not", self.expr(e.operand))
            raise _unsupported(e, type(e.op).__name__)
        if isinstance(e, ast.BoolOp):
            op = "and" if isinstance(e.op, ast.And) else "or"
            values = [self.expr(v) for v in e.values]
            acc = values[0]
            for v in values[1:]:
                acc = BinOp(op, acc, v)
            return acc
        if isinstance(e, ast.Compare):
            if len(e.ops) != 1:
                raise _unsupported(e, "chained comparison")
            op = _CMPOPS.get(type(e.ops[0]))
            if op is None:
                raise _unsupported(e, type(e.ops[0]).__name__)
            return BinOp(op, self.expr(e.left), self.expr(e.comparators[0]))
        if isinstance(e, ast.Call):
            if e.keywords or any(isinstance(a, ast.Starred) for a in e.args):
                raise _unsupported(e, "keyword or starred arguments")
            args = tuple(self.expr(a) for a in e.args)
            f = e.func
            if isinstance(f, ast.Name):
                return Call(f.id, args)
            if isinstance(f, ast.Attribute):
                if isinstance(f.value, ast.Name) and f.value.id in _MODULES:
                    return Call(f"{f.value.id}.{f.attr}", args)
                return MethodCall(self.expr(f.value), f.attr, args)
            raise _unsupported(e, "call of a computed callee")
        if isinstance(e, ast.Attribute):
            if isinstance(e.value, ast.Name) and e.value.id == "math" and e.attr in _MATH_CONSTANTS:
                return Const(_MATH_CONSTANTS[e.attr])
            raise _unsupported(e, "attribute access")
        if isinstance(e, ast.Subscript):
            return Subscript(self.expr(e.value), self._index(e.slice))
        if isinstance(e, ast.List):
            return ListLit(tuple(self.expr(x) for x in e.elts))
        if isinstance(e, ast.Dict):
            if any(k is None for k in e.keys):
                raise _unsupported(e, "dict unpacking")
            return DictLit(tuple(self.expr(k) for k in e.keys), tuple(self.expr(v) for v in e.values))
        names = {
            ast.Lambda: "lambda", ast.ListComp: "comprehension", ast.DictComp: "comprehension",
            ast.SetComp: "comprehension", ast.GeneratorExp: "generator expression",
            ast.IfExp: "conditional expression", ast.Tuple: "tuple", ast.Set: "set literal",
        }
        raise _unsupported(e, names.get(type(e), type(e).__name__))

    def _index(self, node: ast.expr):
        if isinstance(node, ast.Slice):
            part = lambda x: None if x is None else self.expr(x)  # noqa: E731
            return Slice(part(node.lower), part(node.upper), part(node.step))
        return self.expr(node)


def parse(source: str) -> Program:
    """Parse ``source`` into a :class:`Program`.

    Raises :class:`InvalidSyntax` for malformed text and
    :class:`UnsupportedConstruct` for Python outside the subset.
    """
    try:
        tree = ast.parse(source)
    except SyntaxError as exc:
        raise InvalidSyntax(exc.lineno or 0, exc.offset or 0, exc.msg) from None
    program = Program(_Converter().block(tree.body))
    _check_closed_functions(program, tree)
    return program


def _check_closed_functions(program: Program, tree: ast.Module) -> None:
    # Functions may only touch their own parameters and locals.
    lines = {n.name: n.lineno for n in tree.body if isinstance(n, ast.FunctionDef)}
    for fn in program.functions().values():
        bound = set(fn.params)
        for s in walk_stmts(fn.body):
            if isinstance(s, Assign):
                bound.add(s.target)
            elif isinstance(s, For):
                bound.add(s.var)
        for s in walk_stmts(fn.body):
            used = set()
            if isinstance(s, SubscriptAssign):
                used.add(s.target)
            for _, e in stmt_exprs(s):
                used.update(n.name for n in walk_expr(e) if isinstance(n, Var))
            free = used - bound
            if free:
                raise UnsupportedConstruct(lines.get(fn.name, 0), f"global access to {sorted(free)[0]!r}")


def parse_file(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
