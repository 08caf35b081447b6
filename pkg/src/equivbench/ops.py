"""Concrete meaning of operators and builtins, shared by the interpreter and constant folding."""

from __future__ import annotations

import math
import operator

ARITH = {
    "+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv,
    "//": operator.floordiv, "%": operator.mod, "**": operator.pow,
    "==": operator.eq, "!=": operator.ne, "<": operator.lt, "<=": operator.le,
    ">": operator.gt, ">=": operator.ge,
    "in": lambda a, b: a in b, "not in": lambda a, b: a not in b,
}

# Builtins the interpreter knows (besides print and input, which touch I/O).
BUILTINS = {
    "int": int, "float": float, "str": str, "bool": bool, "len": len, "range": range,
    "abs": abs, "min": min, "max": max, "list": list, "sum": sum, "round": round,
    "dict": dict, "sorted": sorted,
}
MATH_FUNCTIONS = {
    name: getattr(math, name)
    for name in ("sqrt", "sin", "cos", "tan", "atan", "atan2", "exp", "log", "floor", "ceil",
                 "fabs", "hypot", "radians", "degrees", "pow", "isclose")
}
for _name, _fn in MATH_FUNCTIONS.items():
    BUILTINS[f"math.{_name}"] = _fn

# Pure builtins that constant folding may evaluate.
FOLDABLE = frozenset({"len", "abs", "min", "max", "int", "float", *(f"math.{n}" for n in MATH_FUNCTIONS)})

# Exponents above this are never folded: the literal would be unreasonably large.
MAX_FOLD_EXPONENT = 1000


def apply_binop(op: str, a, b):
    return ARITH[op](a, b)


def apply_unop(op: str, a):
    return (not a) if op == "not" else -a


def is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)
