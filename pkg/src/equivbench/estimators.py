"""scikit-learn style wrappers, so the rewrites can sit in a ``Pipeline``.

Inputs are source strings (a 1-d array-like of programs, or an ``(n, 2)``
array of reference/candidate pairs for the classifier). The wrappers add no
behaviour of their own; they only adapt the library functions to the
``fit``/``transform``/``predict`` protocol.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from .interp import equivalent
from .manifest import TestManifest
from .parser import parse
from .perturb import PerturbationKind, obfuscate, perturb
from .printer import print_program
from .rewrite import normalize


def _programs(X) -> np.ndarray:
    return column_or_1d(check_array(np.asarray(X, dtype=object).reshape(-1, 1), dtype=None, ensure_2d=True))


class Normalizer(TransformerMixin, BaseEstimator):
    """Map each program's source to the source of its normal form."""

    def fit(self, X, y=None):
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return np.array([print_program(normalize(parse(src))[0]) for src in _programs(X)], dtype=object)


class Perturber(TransformerMixin, BaseEstimator):
    """Apply a seeded equivalence-preserving perturbation (``cp``, ``cf``, ``cp_cf`` or ``obfuscate``).

    Program ``i`` is perturbed with seed ``seed + i`` so a batch is not
    perturbed identically.
    """

    def __init__(self, kind: str = "cp_cf", seed: int = 0):
        self.kind = kind
        self.seed = seed

    def fit(self, X, y=None):
        if self.kind != "obfuscate":
            PerturbationKind(self.kind)  # validates
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        out = []
        for i, src in enumerate(_programs(X)):
            p = parse(src)
            q = obfuscate(p, self.seed + i) if self.kind == "obfuscate" else \
                perturb(p, PerturbationKind(self.kind), self.seed + i)[0]
            out.append(print_program(q))
        return np.array(out, dtype=object)


class EquivalenceClassifier(ClassifierMixin, BaseEstimator):
    """Label ``(reference, candidate)`` source pairs ``"yes"``/``"no"``.

    With ``manifest`` set, the verdict comes from running both programs
    (inconclusive runs are reported as ``"no"``). Without one, the pair is
    ``"yes"`` exactly when both programs have the same normal form, a sound
    but incomplete static check.
    """

    def __init__(self, manifest: Optional[TestManifest] = None):
        self.manifest = manifest

    def fit(self, X, y=None):
        check_array(X, dtype=None)
        self.classes_ = np.array(["no", "yes"], dtype=object)
        self.n_features_in_ = 2
        return self

    def _decide(self, ref: str, cand: str) -> str:
        a, b = parse(ref), parse(cand)
        if self.manifest is not None:
            return "yes" if equivalent(a, b, self.manifest).equivalent == "yes" else "no"
        same = print_program(normalize(a)[0]) == print_program(normalize(b)[0])
        return "yes" if same else "no"

    def predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_array(X, dtype=None)
        if X.shape[1] != 2:
            raise ValueError(f"expected (reference, candidate) pairs, got {X.shape[1]} columns")
        return np.array([self._decide(r, c) for r, c in X], dtype=object)
