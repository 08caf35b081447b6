"""Execution oracles for the two analyses.

Every time control passes a statement (before it, after it, or at a loop
head) the concrete environment is compared against the inferred annotation
at that point: every copy pair must hold equal values and every constant
binding must hold exactly that constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cf_analysis import AConst, Top, infer_cf
from .cp_analysis import infer_cp
from .interp import Outcome, run
from .ops import is_int
from .syntax import Program, const_key


@dataclass
class SoundnessReport:
    checks: int = 0
    unbound_skips: int = 0
    violations: list = field(default_factory=list)  # (sid, point, claim, observed)
    outcomes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _same(a, b) -> bool:
    return type(a) is type(b) and a == b


def check_soundness(p: Program, cases, fuel: int = 1_000_000, entry=None,
                    cp: bool = True, cf: bool = True, limit: int = 20) -> SoundnessReport:
    """Run ``p`` on every case and audit the copy-propagation and constant-folding annotations."""
    report = SoundnessReport()
    cp_map = infer_cp(p) if cp else None
    cf_map = infer_cf(p) if cf else None
    missing = object()

    def annotation(amap, sid, point):
        if point == "pre":
            return amap.pre(sid)
        if point == "post":
            return amap.post(sid)
        return amap.head(sid)

    def hook(sid, point, env):
        if cp_map is not None:
            for x, y in annotation(cp_map, sid, point):
                report.checks += 1
                vx, vy = env.get(x, missing), env.get(y, missing)
                if vx is missing or vy is missing or not _same(vx, vy):
                    if len(report.violations) < limit:
                        report.violations.append((sid, point, f"{x}∼{y}", (vx, vy)))
        if cf_map is not None:
            for name, value in annotation(cf_map, sid, point).bindings:
                if isinstance(value, AConst):
                    v = env.get(name, missing)
                    if v is missing:
                        # The memory join keeps one-sided bindings, so a constant may be
                        # claimed on a path where the variable was never assigned.
                        report.unbound_skips += 1
                        continue
                    report.checks += 1
                    if const_key(v) != const_key(value.value):
                        if len(report.violations) < limit:
                            report.violations.append((sid, point, f"{name}={value.value!r}", v))
                elif isinstance(value, Top) and value.kind == "int" and name in env:
                    report.checks += 1
                    if not is_int(env[name]) and len(report.violations) < limit:
                        report.violations.append((sid, point, f"{name}:int", env[name]))

    for case in cases:
        out: Outcome = run(p, case, fuel, entry, hook)
        report.outcomes.append(out)
    return report
