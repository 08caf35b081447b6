from __future__ import annotations

import json
import subprocess
import sys

import pytest

from equivbench.bench.scoring import Row, load_truth, write_log
from equivbench.bench import PromptKind
from equivbench.cli import main
from equivbench.corpus import default_corpus_dir, figures_dir

CORPUS = default_corpus_dir()
FIG = figures_dir()


def test_parse_and_optimize(tmp_path, capsys):
    assert main(["parse", str(FIG / "factorial_cp.py")]) == 0
    assert "while n > 1:" in capsys.readouterr().out
    trace = tmp_path / "trace.txt"
    out = tmp_path / "opt.py"
    assert main(["optimize", str(FIG / "factorial_cp.py"), "--phase", "cp", "--trace", str(trace), "-o", str(out)]) == 0
    assert out.read_text() == (FIG / "factorial_cp_final.py").read_text()
    assert "CP" in trace.read_text()


def test_annotate(capsys):
    assert main(["annotate", str(FIG / "factorial_cf.py"), "--cf"]) == 0
    assert capsys.readouterr().out.strip()
    with pytest.raises(SystemExit) as info:
        main(["annotate", str(FIG / "factorial_cf.py")])  # --cp or --cf is required
    assert info.value.code == 2


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.py"
    bad.write_text("class A:\n    pass\n")
    assert main(["parse", str(bad)]) == 2
    assert main(["parse", str(tmp_path / "missing.py")]) == 2
    assert main(["perturb", str(FIG / "factorial_cp.py"), "--kind", "bug"]) == 2  # needs a manifest
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "VERB" in capsys.readouterr().out


def test_verify_and_perturb(tmp_path, capsys):
    src, manifest = CORPUS / "fibonacci.py", str(CORPUS / "fibonacci.json")
    good, bad = tmp_path / "good.py", tmp_path / "bad.py"
    assert main(["perturb", str(src), "--kind", "cp_cf", "--seed", "1", "-o", str(good)]) == 0
    assert main(["perturb", str(src), "--kind", "bug", "--seed", "1", "--manifest", manifest, "-o", str(bad)]) == 0
    assert main(["verify", str(src), str(good), "--manifest", manifest]) == 0
    assert main(["verify", str(src), str(bad), "--manifest", manifest]) == 1
    assert "witness:" in capsys.readouterr().out


def test_no_opportunity_exit_code(tmp_path):
    p = tmp_path / "one.py"
    p.write_text("print(1)\n")
    assert main(["perturb", str(p), "--kind", "cp"]) == 1


def test_score(dataset_dir, tmp_path, capsys):
    truth = load_truth(dataset_dir)
    rows = [Row(a, k.value, "gemini", 1, v, truth[a][v]) for a in truth for k in PromptKind
            for v in k.variants[1:]]
    log = tmp_path / "runs.csv"
    log.write_text(write_log(rows))
    out = tmp_path / "report.json"
    assert main(["score", "--log", str(log), "--dataset", str(dataset_dir), "--rounds", "1", "--json", str(out)]) == 0
    assert "100.00%" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    assert doc["design"]["reading"] == "non-reference"
    log.write_text(write_log(rows + [Row("nope", "P1", "gemini", 1, "cp", "yes")]))
    assert main(["score", "--log", str(log), "--dataset", str(dataset_dir)]) == 1


def test_prompts_verb(dataset_dir, tmp_path):
    assert main(["prompts", "--dataset", str(dataset_dir), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fibonacci" / "P1.txt").exists()


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "equivbench.cli", "parse", str(FIG / "factorial_cf.py")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "print(m)" in r.stdout
