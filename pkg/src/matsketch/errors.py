"""Exception hierarchy.

Everything raised by this package derives from :class:`Error`, so callers
(notably the CLI) can distinguish data problems from usage problems with a
single except clause.
"""


class Error(Exception):
    """Base class for all matsketch errors."""


class InvalidMatrixError(Error, ValueError):
    """Input is not a finite, two-dimensional real matrix."""


class NotSquareError(InvalidMatrixError):
    """Operation requires a square matrix."""


class ZeroMatrixError(Error):
    """Operation is undefined for an all-zero matrix."""


class ShapeMismatchError(Error, ValueError):
    """Operand shapes are incompatible (or a rank/size argument exceeds them)."""


class OutOfRangeError(Error, ValueError):
    """Scalar argument lies outside its admissible range."""


class TooLargeError(Error):
    """Input exceeds the size limit of an exact (enumeration-based) oracle."""


class NotSortedError(Error, ValueError):
    """Sequence argument must be sorted nonincreasing."""


class NotSignMatrixError(Error, ValueError):
    """Matrix entries must all be +1 or -1."""


class NotReplayableError(Error, RuntimeError):
    """A single-shot stream was traversed more than once."""


class ConvergenceError(Error, RuntimeError):
    """An iterative numerical backend failed to converge."""


class ParseError(Error, ValueError):
    """A matrix file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
