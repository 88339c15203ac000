"""Exception hierarchy shared by every module."""


class DSPError(Exception):
    """Base class for all errors raised by :mod:`degseq`."""


class DimensionError(DSPError, ValueError):
    """Dimension outside the supported range, or mixed dimensions."""


class InputRangeError(DSPError, ValueError):
    """A coordinate lies outside the range an operation accepts."""


class ResourceLimitError(DSPError):
    """A configured resource cap would be exceeded.

    Distinct from a negative answer: the computation was not attempted.
    """


class DimensionLimitError(DimensionError, ResourceLimitError):
    """Dimension above the guard (``DSP_MAX_D``); raise the guard to proceed."""


class ContractError(DSPError, AssertionError):
    """An internal pre/postcondition failed.

    Raised by the realization moves when misused, and by the pipelines when a
    step that the underlying argument guarantees does not go through.  The
    optional ``trace`` carries the steps applied so far.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
