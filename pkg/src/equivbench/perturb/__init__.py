"""Dataset generation: inverse rewrites, obfuscation, bug injection, variant sets."""

from .bugs import BugDescriptor, inject_bug
from .inverse_cf import perturb_cf
from .inverse_cp import perturb_cp
from .obfuscate import deobfuscate, obfuscate, obfuscation_map, rename
from .variants import PerturbationKind, perturb, perturb_both

__all__ = [
    "BugDescriptor", "PerturbationKind", "deobfuscate", "inject_bug", "obfuscate",
    "obfuscation_map", "perturb", "perturb_both", "perturb_cf", "perturb_cp", "rename",
]

from .dataset import (  # noqa: E402
    CORRECT, INCORRECT, VARIANTS, VariantSet, build_dataset, build_variant_set, dataset_algorithms,
    load_variant_set,
)

__all__ += ["CORRECT", "INCORRECT", "VARIANTS", "VariantSet", "build_dataset", "build_variant_set",
            "dataset_algorithms", "load_variant_set"]
