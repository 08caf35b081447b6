"""Rule drivers: exhaustive application, normalization and trace replay."""

from __future__ import annotations

import random
from typing import Optional

from ..errors import NormalizationDiverged
from ..syntax import Program
from .cf import CF_RULES
from .common import Context, RewriteStep, Trace
from .cp import CP_RULES
from .gc import GC_RULES

MAX_ROUNDS = 64

_BY_ID = {name: fn for name, fn in (*CP_RULES, *CF_RULES, *GC_RULES)}


def _family(rule_id: str) -> str:
    return "CF4" if rule_id.startswith("CF4") else rule_id


def step_limit(p: Program) -> int:
    return 20 * len(p) + 200


def exhaust(p: Program, rules, rng: Optional[random.Random] = None) -> tuple[Program, Trace]:
    """Apply ``rules`` until none fires, re-analysing after every step.

    Rules are tried in list order and statements top-down; with ``rng`` the
    next firing is instead drawn uniformly from all applicable ones.
    """
    trace = Trace(p, p)
    ctx = Context(p)
    for _ in range(step_limit(p)):
        chosen = None
        if rng is None:
            for name, rule in rules:
                for s in ctx.program.statements():
                    firing = rule(ctx, s)
                    if firing is not None:
                        chosen = (name, s, firing)
                        break
                if chosen:
                    break
        else:
            options = [(name, s, f) for name, rule in rules for s in ctx.program.statements()
                       if (f := rule(ctx, s)) is not None]
            chosen = rng.choice(options) if options else None
        if chosen is None:
            trace.result = ctx.program
            return ctx.program, trace
        name, s, firing = chosen
        trace.steps.append(RewriteStep(firing.rule or name, s.sid, firing.before, firing.after))
        ctx = Context(firing.program)
    raise NormalizationDiverged(f"rules still firing after {step_limit(p)} steps")


def apply_cp(p: Program, ann=None, rng=None) -> tuple[Program, Trace]:
    """Copy-propagation rules 1, 3, 4, 5, 2 to a fixpoint.

    ``ann`` is accepted for symmetry with the analyses; annotations are
    recomputed after every step regardless.
    """
    return exhaust(p, CP_RULES, rng)


def apply_cf(p: Program, ann=None, rng=None) -> tuple[Program, Trace]:
    """Constant-folding rules 4, 2, 1, 3b, 3a to a fixpoint."""
    return exhaust(p, CF_RULES, rng)


def garbage_collect(p: Program) -> tuple[Program, Trace]:
    return exhaust(p, GC_RULES)


def normalize(p: Program, rng: Optional[random.Random] = None) -> tuple[Program, Trace]:
    """Alternate constant folding, copy propagation and garbage collection until stable."""
    trace = Trace(p, p)
    current = p
    for _ in range(MAX_ROUNDS):
        start = current
        for phase in (apply_cf, apply_cp):
            current, t = phase(current, rng=rng)
            trace.extend(t)
        current, t = garbage_collect(current)
        trace.extend(t)
        if current == start:
            trace.result = current
            return current, trace
    raise NormalizationDiverged(f"no normal form after {MAX_ROUNDS} rounds")


def apply_step(p: Program, step: RewriteStep) -> Program:
    """Re-fire one recorded step; raises ``ValueError`` if it no longer applies."""
    rule = _BY_ID.get(_family(step.rule))
    if rule is None or step.site >= len(p):
        raise ValueError(f"cannot replay {step.rule} at stmt {step.site}")
    firing = rule(Context(p), p[step.site])
    if firing is None or (firing.rule or step.rule) != step.rule:
        raise ValueError(f"{step.rule} does not apply at stmt {step.site}")
    return firing.program


def replay(p: Program, steps) -> Program:
    for step in steps:
        p = apply_step(p, step)
    return p
