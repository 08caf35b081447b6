"""Perturbation kinds and their composition."""

from __future__ import annotations

import enum

from ..errors import NoOpportunity
from ..syntax import Program
from .inverse_cf import perturb_cf_traced
from .inverse_cp import perturb_cp_traced


class PerturbationKind(enum.Enum):
    CP = "cp"
    CF = "cf"
    CP_CF = "cp_cf"


def perturb_both_traced(p: Program, seed: int) -> tuple[Program, list[str]]:
    """Constant-folding moves first, then copy-propagation moves on the result."""
    log: list[str] = []
    current = p
    failures = 0
    for phase, offset in ((perturb_cf_traced, 0), (perturb_cp_traced, 1)):
        try:
            current, moves = phase(current, seed + offset)
            log += moves
        except NoOpportunity:
            failures += 1
    if failures == 2:
        raise NoOpportunity("neither constant-folding nor copy-propagation sites")
    return current, log


def perturb_both(p: Program, seed: int) -> Program:
    return perturb_both_traced(p, seed)[0]


_TRACED = {
    PerturbationKind.CP: perturb_cp_traced,
    PerturbationKind.CF: perturb_cf_traced,
    PerturbationKind.CP_CF: perturb_both_traced,
}


def perturb(p: Program, kind: PerturbationKind, seed: int) -> tuple[Program, list[str]]:
    return _TRACED[PerturbationKind(kind)](p, seed)
