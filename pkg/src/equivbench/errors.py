"""Exception hierarchy shared by the whole package."""

from __future__ import annotations


class EquivBenchError(Exception):
    """Base class for every error raised on purpose by this package."""


class ParseError(EquivBenchError):
    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class InvalidSyntax(ParseError):
    """Source text is not valid Python at all."""


class UnsupportedConstruct(ParseError):
    """Valid Python that falls outside the supported subset."""

    def __init__(self, line: int, construct: str, column: int = 0) -> None:
        super().__init__(line, column, f"unsupported construct: {construct}")
        self.construct = construct


class RedefinedInScope(EquivBenchError):
    """A substitution target is re-bound inside the node being rewritten."""


class IterationLimitExceeded(EquivBenchError):
    pass


class NormalizationDiverged(EquivBenchError):
    pass


class ManifestError(EquivBenchError):
    pass


class ManifestMismatch(ManifestError):
    """A test case does not fit the entry point's signature."""


class NoOpportunity(EquivBenchError):
    """The program offers no site for the requested perturbation."""


class NoKillableMutant(EquivBenchError):
    pass


class PerturbationError(EquivBenchError):
    """A generated variant failed its own equivalence post-check."""


class LogTruthMismatch(EquivBenchError):
    def __init__(self, orphans: list) -> None:
        super().__init__(f"{len(orphans)} log rows do not match the dataset: {orphans[:5]}")
        self.orphans = orphans
