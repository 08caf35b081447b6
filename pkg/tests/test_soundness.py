from __future__ import annotations

from hypothesis import given, settings, strategies as st

from equivbench import parse
from equivbench.fuzz import fuzz_manifest, random_program
from equivbench.soundness import check_soundness


def test_copy_program_is_audited():
    p = parse("x = int(input())\ny = x\nz = 3\nprint(y + z)")
    m = fuzz_manifest()
    r = check_soundness(p, m.cases[:3], m.fuel)
    assert r.ok and r.checks > 0


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_annotations_hold_on_random_programs(seed):
    m = fuzz_manifest()
    r = check_soundness(random_program(seed), m.cases, m.fuel)
    assert r.ok, r.violations
