"""Reference interpreter for the subset and the execution-based equivalence check.

Values are ordinary Python objects, so lists alias exactly as in Python
(``b = a`` shares the list). Every executed statement and every evaluated
expression node costs one unit of fuel; running out is reported as an
outcome, never as an exception.
"""

from __future__ import annotations

import copy
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ManifestMismatch
from .manifest import Case, TestManifest, thaw
from .ops import ARITH, BUILTINS
from .syntax import (
    Assign, BinOp, Call, Const, DictLit, ExprStmt, For, FunDef, If, ListLit, MethodCall, Pass,
    Program, Return, Slice, Subscript, SubscriptAssign, UnOp, Var, While,
)

MAX_CALL_DEPTH = 200
MAX_POW_EXPONENT = 10_000
NORMAL = "normal"
FUEL_EXHAUSTED = "fuel-exhausted"

METHODS = frozenset({
    "append", "pop", "insert", "remove", "extend", "sort", "reverse", "clear", "update",
    "setdefault", "get", "keys", "values", "items", "index", "count", "copy",
    "join", "split", "strip", "upper", "lower", "startswith", "endswith", "replace",
})

_HOST_ERRORS = (
    (ZeroDivisionError, "div-by-zero"),
    (IndexError, "index-out-of-range"),
    (KeyError, "index-out-of-range"),
    (RecursionError, "recursion-depth"),
    (TypeError, "type-error"),
    (AttributeError, "type-error"),
    (OverflowError, "value-error"),
    (ValueError, "value-error"),
)


@dataclass(frozen=True)
class InputTape:
    values: tuple = ()


@dataclass(frozen=True)
class Outcome:
    stdout: tuple = ()
    result: object = None
    status: str = NORMAL

    @property
    def ok(self) -> bool:
        return self.status == NORMAL

    @property
    def error_kind(self) -> Optional[str]:
        return self.status.split(":", 1)[1] if self.status.startswith("error:") else None

    def __str__(self) -> str:
        out = " | ".join(self.stdout) or "(no output)"
        if self.result is not None:
            out += f" -> {self.result!r}"
        return out if self.ok else f"{out} [{self.status}]"


@dataclass
class Verdict:
    equivalent: str  # "yes" | "no" | "inconclusive"
    witness: Optional[Case] = None
    outcomes: Optional[tuple] = None
    cases_run: int = 0

    @property
    def exit_code(self) -> int:
        return {"yes": 0, "no": 1}.get(self.equivalent, 2)


class _Fault(Exception):
    def __init__(self, kind: str) -> None:
        super().__init__(kind)
        self.kind = kind


class _OutOfFuel(Exception):
    pass


class _Return(Exception):
    def __init__(self, value) -> None:
        self.value = value


Hook = Callable[[int, str, dict], None]


class _Machine:
    def __init__(self, program: Program, tape, fuel: int, hook: Optional[Hook]) -> None:
        self.program = program
        self.tape = list(tape)
        self.fuel = fuel
        self.hook = hook
        self.stdout: list[str] = []
        self.functions: dict[str, FunDef] = {}
        self.depth = 0

    # statements

    def block(self, stmts, env: dict) -> None:
        for s in stmts:
            self.stmt(s, env)

    def stmt(self, s, env: dict) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise _OutOfFuel
        hook = self.hook
        if hook:
            hook(s.sid, "pre", env)
        t = type(s)
        if t is Assign:
            env[s.target] = self.expr(s.value, env)
        elif t is SubscriptAssign:
            value = self.expr(s.value, env)
            target = self._lookup(s.target, env)
            target[self.expr(s.index, env)] = value
        elif t is ExprStmt:
            self.expr(s.call, env)
        elif t is If:
            self.block(s.then if self.expr(s.guard, env) else s.orelse, env)
        elif t is While:
            while True:
                if hook:
                    hook(s.sid, "head", env)
                if not self.expr(s.guard, env):
                    break
                self.block(s.body, env)
                self._tick()
        elif t is For:
            for item in self._iterate(self.expr(s.iterable, env)):
                if hook:
                    hook(s.sid, "head", env)
                env[s.var] = item
                self.block(s.body, env)
                self._tick()
            if hook:
                hook(s.sid, "head", env)
        elif t is Return:
            raise _Return(None if s.value is None else self.expr(s.value, env))
        elif t is FunDef:
            self.functions[s.name] = s
        elif t is not Pass:
            raise _Fault("type-error")
        if hook:
            hook(s.sid, "post", env)

    def _tick(self) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise _OutOfFuel

    @staticmethod
    def _iterate(value):
        if isinstance(value, (list, range, str, dict)):
            return iter(value)
        raise _Fault("type-error")

    # expressions

    def _lookup(self, name: str, env: dict):
        try:
            return env[name]
        except KeyError:
            raise _Fault("unbound-variable") from None

    def expr(self, e, env: dict):
        self.fuel -= 1
        if self.fuel < 0:
            raise _OutOfFuel
        t = type(e)
        if t is Const:
            return e.value
        if t is Var:
            return self._lookup(e.name, env)
        if t is BinOp:
            op = e.op
            left = self.expr(e.left, env)
            if op == "and":
                return self.expr(e.right, env) if left else left
            if op == "or":
                return left if left else self.expr(e.right, env)
            right = self.expr(e.right, env)
            if op == "**" and isinstance(right, int) and abs(right) > MAX_POW_EXPONENT:
                if isinstance(left, int) and abs(left) > 1:
                    raise _Fault("value-error")
            return ARITH[op](left, right)
        if t is UnOp:
            v = self.expr(e.operand, env)
            return (not v) if e.op == "not" else -v
        if t is Call:
            return self.call(e.func, [self.expr(a, env) for a in e.args])
        if t is Subscript:
            base = self.expr(e.value, env)
            return base[self.expr(e.index, env)]
        if t is Slice:
            return slice(*(None if p is None else self.expr(p, env) for p in (e.lower, e.upper, e.step)))
        if t is ListLit:
            return [self.expr(x, env) for x in e.items]
        if t is DictLit:
            return {self.expr(k, env): self.expr(v, env) for k, v in zip(e.keys, e.values)}
        if t is MethodCall:
            obj = self.expr(e.obj, env)
            args = [self.expr(a, env) for a in e.args]
            if e.method not in METHODS:
                raise _Fault("type-error")
            return getattr(obj, e.method)(*args)
        raise _Fault("type-error")

    def call(self, name: str, args: list):
        if name == "print":
            self.stdout.append(" ".join(str(a) for a in args))
            return None
        if name == "input":
            if not self.tape:
                raise _Fault("tape-exhausted")
            return str(self.tape.pop(0))
        fn = self.functions.get(name)
        if fn is not None:
            return self.invoke(fn, args)
        builtin = BUILTINS.get(name)
        if builtin is None:
            raise _Fault("unbound-variable")
        if name == "range" and len(args) == 3 and args[2] == 0:
            raise _Fault("value-error")
        return builtin(*args)

    def invoke(self, fn: FunDef, args: list):
        if len(args) != len(fn.params):
            raise _Fault("type-error")
        if self.depth >= MAX_CALL_DEPTH:
            raise _Fault("recursion-depth")
        self.depth += 1
        try:
            self.block(fn.body, dict(zip(fn.params, args)))
        except _Return as r:
            return r.value
        finally:
            self.depth -= 1
        return None


def _normalize_case(case) -> Case:
    if isinstance(case, Case):
        return case
    if isinstance(case, InputTape):
        return Case((), tuple(case.values))
    if isinstance(case, dict):
        return Case.from_json(case)
    return Case(tuple(case), ())


def run(p: Program, case=Case(), fuel: int = 1_000_000, entry: Optional[str] = None,
        hook: Optional[Hook] = None) -> Outcome:
    """Execute ``p`` on one input and report what happened.

    With ``entry`` the top level is executed first (defining functions) and
    then ``entry`` is called on a private deep copy of the case arguments.
    """
    case = _normalize_case(case)
    m = _Machine(p, case.tape, fuel, hook)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20_000))
    result = None
    try:
        env: dict = {}
        m.block(p.body, env)
        if entry and entry != "script":
            fn = m.functions.get(entry)
            if fn is None:
                raise _Fault("unbound-variable")
            result = m.invoke(fn, copy.deepcopy([thaw(a) for a in case.args]))
        status = NORMAL
    except _OutOfFuel:
        status = FUEL_EXHAUSTED
    except _Fault as f:
        status = f"error:{f.kind}"
    except _Return:
        status = "error:type-error"  # return outside a function
    except Exception as exc:  # host-level fault of an operator or builtin
        status = "error:" + next((k for t, k in _HOST_ERRORS if isinstance(exc, t)), "type-error")
    finally:
        sys.setrecursionlimit(limit)
    return Outcome(tuple(m.stdout), result, status)


@dataclass
class ProbeLog:
    outcome: Outcome
    records: list = field(default_factory=list)  # (sid, point, name, value)


def instrumented_run(p: Program, case, probes, fuel: int = 1_000_000,
                     entry: Optional[str] = None) -> ProbeLog:
    """Run ``p`` and log each probed ``(sid, name)`` whenever control passes that statement.

    A statement is observed before it runs (``pre``), after it completes
    (``post``) and, for loops, each time the loop head is reached (``head``).
    Unbound variables are logged as :data:`UNBOUND`.
    """
    wanted: dict[int, list[str]] = {}
    for sid, name in probes:
        wanted.setdefault(sid, []).append(name)
    records: list = []

    def hook(sid, point, env):
        for name in wanted.get(sid, ()):
            v = env.get(name, UNBOUND)
            records.append((sid, point, name, copy.deepcopy(v)))

    outcome = run(p, case, fuel, entry, hook)
    return ProbeLog(outcome, records)


class _Unbound:
    def __repr__(self) -> str:
        return "<unbound>"

    def __deepcopy__(self, memo) -> "_Unbound":
        return self


UNBOUND = _Unbound()


def _close(a, b, tol: float) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b and type(a) is type(b)
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return math.isclose(a, b, rel_tol=tol, abs_tol=tol) or a == b
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return type(a) is type(b) and len(a) == len(b) and all(_close(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_close(a[k], b[k], tol) for k in a)
    return a == b


def _line_close(a: str, b: str, tol: float) -> bool:
    if a == b:
        return True
    ta, tb = a.replace("[", " ").replace("]", " ").replace(",", " ").split(), \
        b.replace("[", " ").replace("]", " ").replace(",", " ").split()
    if len(ta) != len(tb):
        return False
    for x, y in zip(ta, tb):
        if x == y:
            continue
        try:
            if not math.isclose(float(x), float(y), rel_tol=tol, abs_tol=tol):
                return False
        except ValueError:
            return False
    return True


def same_outcome(a: Outcome, b: Outcome, tolerance: Optional[float] = None) -> bool:
    if tolerance is None:
        return a.status == b.status and a.stdout == b.stdout and _exact(a.result, b.result)
    return (a.status == b.status and len(a.stdout) == len(b.stdout)
            and all(_line_close(x, y, tolerance) for x, y in zip(a.stdout, b.stdout))
            and _close(a.result, b.result, tolerance))


def _exact(a, b) -> bool:
    # ``1 == 1.0 == True`` in Python; outcomes must agree on the type too.
    if type(a) is not type(b):
        return False
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(_exact(x, y) for x, y in zip(a, b))
    if isinstance(a, dict):
        return list(a) == list(b) and all(_exact(a[k], b[k]) for k in a)
    if isinstance(a, float) and math.isnan(a):
        return math.isnan(b)
    return a == b


def _check_arity(p: Program, m: TestManifest) -> None:
    if m.script:
        if any(c.args for c in m.cases):
            raise ManifestMismatch("script-mode manifest carries function arguments")
        return
    fn = p.functions().get(m.entry)
    if fn is None:
        raise ManifestMismatch(f"entry function {m.entry!r} not defined")
    for c in m.cases:
        if len(c.args) != len(fn.params):
            raise ManifestMismatch(f"case {c} has {len(c.args)} arguments, {m.entry} takes {len(fn.params)}")


def run_manifest(p: Program, m: TestManifest) -> list[Outcome]:
    return [run(p, c, m.fuel, m.entry) for c in m.cases]


def equivalent(p1: Program, p2: Program, m: TestManifest, entry2: Optional[str] = None) -> Verdict:
    """Compare two programs case by case; the first differing case is the witness.

    ``entry2`` names the entry of ``p2`` when it differs (obfuscated variants).
    """
    _check_arity(p1, m)
    m2 = m if entry2 is None else TestManifest(entry2, m.cases, m.fuel, m.comparison, m.tolerance)
    _check_arity(p2, m2)
    tol = m.tolerance if m.comparison == "tolerance" else None
    for i, c in enumerate(m.cases):
        a, b = run(p1, c, m.fuel, m.entry), run(p2, c, m.fuel, m2.entry)
        if FUEL_EXHAUSTED in (a.status, b.status):
            return Verdict("inconclusive", c, (a, b), i + 1)
        if not same_outcome(a, b, tol):
            return Verdict("no", c, (a, b), i + 1)
    return Verdict("yes", None, None, len(m.cases))
