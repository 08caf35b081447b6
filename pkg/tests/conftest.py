from __future__ import annotations

from pathlib import Path

import pytest

from equivbench import parse_file
from equivbench.corpus import figures_dir, load_corpus

GOLDEN = Path(__file__).parent / "golden"

# criterion number → (passed, detail); filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def figures():
    d = figures_dir()
    return {name: parse_file(d / f"{name}.py")
            for name in ("factorial_cp", "factorial_cp_final", "factorial_cf", "factorial_cf_final")}


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory):
    from equivbench.perturb import build_dataset

    out = tmp_path_factory.mktemp("dataset")
    build_dataset(None, 42, out)
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
