"""Benchmark prompts and scoring of labelled chatbot answers."""

from .prompts import (
    CONTEXTLESS_PREAMBLE, CONTEXTUAL_PREAMBLE, PromptKind, count_function_snippets, render, render_all,
    render_prompt, split_snippets,
)
from .scoring import (
    AccuracyReport, DesignReport, Row, expected_counts, load_truth, read_log, round_half_up, score,
    standard_truth, validate_design, write_log,
)

__all__ = [
    "AccuracyReport", "CONTEXTLESS_PREAMBLE", "CONTEXTUAL_PREAMBLE", "DesignReport", "PromptKind", "Row",
    "count_function_snippets", "expected_counts", "load_truth", "read_log", "render", "render_all",
    "render_prompt", "round_half_up", "score", "split_snippets", "standard_truth", "validate_design",
    "write_log",
]
