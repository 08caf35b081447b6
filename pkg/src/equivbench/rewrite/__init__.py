"""Source-level rewrites justified by the copy-propagation and constant-folding annotations."""

from .common import RewriteStep, Trace
from .driver import apply_cf, apply_cp, apply_step, exhaust, garbage_collect, normalize, replay

__all__ = [
    "RewriteStep", "Trace", "apply_cf", "apply_cp", "apply_step", "exhaust",
    "garbage_collect", "normalize", "replay",
]
