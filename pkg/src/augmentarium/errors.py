"""Exception types shared across the package.

CLI exit-code mapping: usage errors -> 1, DataError -> 2, NumericError -> 3.
"""


class AugmentariumError(Exception):
    """Base class for all package errors."""


class DataError(AugmentariumError):
    """Malformed, inconsistent, or missing input data."""


class NumericError(AugmentariumError):
    """Numerical failure during training or evaluation."""


class ParseError(DataError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, path, line, reason):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: {reason}")


class DimensionMismatch(DataError):
    pass


class UnknownId(DataError):
    pass


class UnknownParent(DataError):
    pass


class InsufficientSamples(DataError):
    pass


class InvalidSizes(DataError):
    pass


class EmptyInput(DataError):
    pass


class EmptyLexicon(DataError):
    pass


class MissingVector(DataError):
    pass


class MissingScore(DataError):
    pass


class EmptyPool(DataError):
    pass


class TooFewRuns(DataError):
    pass


class IoError(DataError):
    """Filesystem failure while writing report or output files."""


class NonFiniteLoss(NumericError):
    """Training produced a NaN or infinite loss; the run is aborted."""
