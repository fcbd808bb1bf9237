"""Exception types shared across the package."""


class LosscalError(Exception):
    """Base class for errors raised by losscal."""


class DomainError(LosscalError, ValueError):
    """A numeric argument lies outside its mathematical domain."""


class DimensionMismatch(LosscalError, ValueError):
    """Array shapes are inconsistent (score vector vs. weight matrix, etc.)."""


class NoConsistentPosterior(LosscalError):
    """No probability vector reproduces the given multi-class scores."""


class EmptyDataset(LosscalError, ValueError):
    """A dataset or file contained no rows."""


class UnknownSignal(LosscalError, IndexError):
    """Signal index outside the experiment's signal set."""


class ParseError(LosscalError):
    """Malformed input file.  Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RangeError(ParseError):
    """A parsed score or label lies outside its allowed range."""
