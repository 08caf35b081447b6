"""Test manifests: which inputs a program is exercised on.

A manifest is a JSON document::

    {
      "entry": "fib",                # function name, or "script"
      "fuel": 1000000,
      "comparison": "exact",         # or "tolerance"
      "tolerance": 1e-9,
      "seed": 0,
      "min_cases": 20,
      "args": [{"ints": [0, 15]}],   # one domain per parameter
      "tape": [],                    # one domain per input() call
      "cases": [{"args": [3]}]       # explicit extra cases
    }

Domains are ``{"ints": [lo, hi]}`` (every integer in the closed range),
``{"values": [...]}`` (an enumeration) or
``{"lists": {"lengths": [0, 6], "ints": [lo, hi], "per_length": 3}}``
(seeded random integer lists of every length in range). The enumerated
domains are combined as a cartesian product; seeded random draws from the
same domains top the list up to ``min_cases``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .errors import ManifestError

DEFAULT_FUEL = 1_000_000
MIN_CASES = 20


@dataclass(frozen=True)
class Case:
    """One input: positional arguments for the entry function and/or an input tape."""

    args: tuple = ()
    tape: tuple = ()

    def to_json(self) -> dict:
        out: dict[str, Any] = {}
        if self.args:
            out["args"] = list(self.args)
        if self.tape:
            out["tape"] = list(self.tape)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Case":
        return cls(tuple(_freeze(a) for a in d.get("args", ())), tuple(d.get("tape", ())))

    def __str__(self) -> str:
        parts = []
        if self.args:
            parts.append("args=" + json.dumps(list(self.args)))
        if self.tape:
            parts.append("tape=" + json.dumps(list(self.tape)))
        return " ".join(parts) or "no input"


def _freeze(v):
    # Lists are stored as tuples so cases are hashable; the interpreter thaws them.
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    return v


def thaw(v):
    if isinstance(v, tuple):
        return [thaw(x) for x in v]
    if isinstance(v, dict):
        return {k: thaw(x) for k, x in v.items()}
    return v


@dataclass
class TestManifest:
    __test__ = False  # not a pytest class

    entry: str = "script"
    cases: list = field(default_factory=list)
    fuel: int = DEFAULT_FUEL
    comparison: str = "exact"
    tolerance: float = 1e-9

    @property
    def script(self) -> bool:
        return self.entry == "script"

    def to_json(self) -> dict:
        return {
            "entry": self.entry, "fuel": self.fuel, "comparison": self.comparison,
            "tolerance": self.tolerance, "cases": [c.to_json() for c in self.cases],
        }


def _enumerate(domain: dict, rng: random.Random) -> list:
    if "ints" in domain:
        lo, hi = domain["ints"]
        return list(range(lo, hi + 1))
    if "values" in domain:
        return [_freeze(v) for v in domain["values"]]
    if "lists" in domain:
        config = domain["lists"]
        lo_len, hi_len = config.get("lengths", [0, 6])
        lo, hi = config.get("ints", [0, 9])
        out = []
        for n in range(lo_len, hi_len + 1):
            for _ in range(config.get("per_length", 1) if n else 1):
                out.append(tuple(rng.randint(lo, hi) for _ in range(n)))
        return out
    raise ManifestError(f"unknown domain {domain!r}")


def _draw(domain: dict, rng: random.Random):
    if "ints" in domain:
        return rng.randint(*domain["ints"])
    if "values" in domain:
        return _freeze(rng.choice(domain["values"]))
    config = domain["lists"]
    n = rng.randint(*config.get("lengths", [0, 6]))
    return tuple(rng.randint(*config.get("ints", [0, 9])) for _ in range(n))


def build_manifest(config: dict) -> TestManifest:
    """Expand a manifest document into concrete cases (deterministic per seed)."""
    rng = random.Random(config.get("seed", 0))
    arg_domains = config.get("args", [])
    tape_domains = config.get("tape", [])
    cases: list[Case] = [Case.from_json(c) for c in config.get("cases", [])]
    n_args = len(arg_domains)
    if arg_domains or tape_domains:
        pools = [_enumerate(d, rng) for d in (*arg_domains, *tape_domains)]
        for combo in itertools.product(*pools):
            cases.append(Case(tuple(combo[:n_args]), tuple(combo[n_args:])))
        want = config.get("min_cases", MIN_CASES)
        attempts = 0
        while len(set(cases)) < want and attempts < 100 * want:
            attempts += 1
            combo = [_draw(d, rng) for d in (*arg_domains, *tape_domains)]
            cases.append(Case(tuple(combo[:n_args]), tuple(combo[n_args:])))
    unique = list(dict.fromkeys(cases))
    return TestManifest(
        entry=config.get("entry", "script"),
        cases=unique,
        fuel=config.get("fuel", DEFAULT_FUEL),
        comparison=config.get("comparison", "exact"),
        tolerance=config.get("tolerance", 1e-9),
    )


def load_manifest(path) -> TestManifest:
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from None
    return build_manifest(config)


def tape_manifest(values, fuel: int = DEFAULT_FUEL) -> TestManifest:
    """Script-mode manifest with one single-value tape per value."""
    return TestManifest("script", [Case((), (v,)) for v in values], fuel)


def manifest_for(entry: Optional[str], cases, fuel: int = DEFAULT_FUEL) -> TestManifest:
    return TestManifest(entry or "script", list(cases), fuel)
