"""Random integer programs of the subset, for property testing the analyses and rewrites.

Generated programs read two integers from the input tape, use a small pool
of variables (plus copy temporaries), nest ifs and bounded loops, may call a
helper function, and print intermediate results. Loops always terminate:
``while`` loops count a dedicated variable up to a small bound and ``for``
loops run over small ranges. Division and modulo by possibly-zero values are
allowed on purpose, so runtime errors are exercised too.
"""

from __future__ import annotations

import random
from typing import Optional

from .manifest import Case, TestManifest
from .syntax import (
    Assign, BinOp, Call, Const, ExprStmt, For, FunDef, If, Program, Return, UnOp, Var, While,
)

TAPE_VALUES = range(-2, 3)
FUZZ_FUEL = 20_000
POOL = ("a", "b", "c", "n", "tmp", "m")


class _Gen:
    def __init__(self, rng: random.Random) -> None:
        self.rng = rng
        self.counters = 0
        self.helper: Optional[str] = None

    def expr(self, env: list[str], depth: int = 0):
        r = self.rng.random()
        if depth >= 2 or r < 0.35:
            if env and self.rng.random() < 0.7:
                return Var(self.rng.choice(env))
            return Const(self.rng.randint(-3, 5))
        if r < 0.85:
            op = self.rng.choice(("+", "-", "*", "+", "-", "//", "%"))
            right = self.expr(env, depth + 1)
            if op in ("//", "%") and self.rng.random() < 0.7:
                right = Const(self.rng.randint(1, 4))
            return BinOp(op, self.expr(env, depth + 1), right)
        if r < 0.92:
            return UnOp("-", self.expr(env, depth + 1))
        if self.helper and env:
            return Call(self.helper, (self.expr(env, depth + 1), self.expr(env, depth + 1)))
        return Call("abs", (self.expr(env, depth + 1),))

    def guard(self, env: list[str]):
        op = self.rng.choice(("<", "<=", ">", ">=", "==", "!="))
        return BinOp(op, self.expr(env, 1), self.expr(env, 1))

    def block(self, env: list[str], size: int, depth: int, loop_vars: frozenset) -> tuple:
        out = []
        env = list(env)
        for _ in range(size):
            out.extend(self.stmt(env, depth, loop_vars))
        return tuple(out)

    def stmt(self, env: list[str], depth: int, loop_vars: frozenset) -> list:
        rng = self.rng
        r = rng.random()
        writable = [v for v in POOL if v not in loop_vars]
        if r < 0.4 or depth >= 2:
            target = rng.choice(writable)
            if env and rng.random() < 0.35:
                value = Var(rng.choice(env))  # a copy
            else:
                value = self.expr(env)
            if target not in env:
                env.append(target)
            return [Assign(target, value)]
        if r < 0.55:
            return [ExprStmt(Call("print", (self.expr(env),)))]
        if r < 0.72:
            then = self.block(env, rng.randint(1, 3), depth + 1, loop_vars)
            orelse = self.block(env, rng.randint(0, 2), depth + 1, loop_vars)
            return [If(self.guard(env), then, orelse)]
        if r < 0.86:
            self.counters += 1
            w = f"w{self.counters}"
            bound = rng.randint(0, 3)
            body = self.block(env + [w], rng.randint(1, 3), depth + 1, loop_vars | {w})
            step = Assign(w, BinOp("+", Var(w), Const(1)))
            return [Assign(w, Const(0)), While(BinOp("<", Var(w), Const(bound)), body + (step,))]
        self.counters += 1
        i = f"i{self.counters}"
        body = self.block(env + [i], rng.randint(1, 3), depth + 1, loop_vars | {i})
        return [For(i, Call("range", (Const(rng.randint(0, 3)),)), body)]


def random_program(seed: int) -> Program:
    rng = random.Random(seed)
    g = _Gen(rng)
    body: list = []
    if rng.random() < 0.3:
        fenv = ["p", "q"]
        fbody = g.block(fenv, rng.randint(1, 3), 1, frozenset({"p", "q"}))
        body.append(FunDef("helper", ("p", "q"), fbody + (Return(g.expr(fenv)),)))
        g.helper = "helper"
    body.append(Assign("n", Call("int", (Call("input", ()),))))
    body.append(Assign("a", Call("int", (Call("input", ()),))))
    env = ["n", "a"]
    body.extend(g.block(env, rng.randint(3, 8), 0, frozenset()))
    body.append(ExprStmt(Call("print", (Var(rng.choice(env)),))))
    return Program(tuple(body))


def fuzz_manifest() -> TestManifest:
    """Every pair of tape values in −2..2 (25 cases)."""
    cases = [Case((), (x, y)) for x in TAPE_VALUES for y in TAPE_VALUES]
    return TestManifest("script", cases, FUZZ_FUEL)


def corpus(count: int, seed: int = 0) -> list[Program]:
    return [random_program(seed * 1_000_003 + k) for k in range(count)]
