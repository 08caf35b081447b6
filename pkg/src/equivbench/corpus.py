"""The bundled reference algorithms and their test manifests."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .manifest import TestManifest, load_manifest
from .parser import parse_file
from .syntax import Program

# Directory name → display name, in benchmark-table order.
ALGORITHMS = {
    "duplicate_removal": "Duplicate Removal",
    "sieve": "Sieve",
    "count_occurrences": "Count Occurrences",
    "fibonacci": "Fibonacci",
    "primality": "Primality",
    "find_duplicate": "Find Duplicate",
    "bubble_sort": "Bubble sort",
    "anti_aliasing": "Anti Aliasing",
    "fft": "FFT",
    "rotate_3d": "Rotate 3D",
    "unification": "Unification",
}


@dataclass(frozen=True)
class Algorithm:
    name: str
    program: Program
    manifest: TestManifest
    source: str


def default_corpus_dir() -> Path:
    return Path(str(resources.files("equivbench") / "data" / "corpus"))


def figures_dir() -> Path:
    return Path(str(resources.files("equivbench") / "data" / "figures"))


def load_corpus(directory: Optional[Path] = None) -> list[Algorithm]:
    """Every ``<name>.py`` with a sibling ``<name>.json`` manifest, known algorithms first."""
    directory = Path(directory) if directory else default_corpus_dir()
    names = [n for n in ALGORITHMS if (directory / f"{n}.py").exists()]
    names += sorted(p.stem for p in directory.glob("*.py") if p.stem not in ALGORITHMS)
    out = []
    for n in names:
        path = directory / f"{n}.py"
        out.append(Algorithm(n, parse_file(path), load_manifest(directory / f"{n}.json"),
                             path.read_text(encoding="utf-8")))
    return out


def corpus_hash(directory: Optional[Path] = None) -> str:
    directory = Path(directory) if directory else default_corpus_dir()
    h = hashlib.sha256()
    for path in sorted(directory.glob("*")):
        if path.suffix in (".py", ".json"):
            h.update(path.name.encode())
            h.update(path.read_bytes())
    return h.hexdigest()
