"""Exception types shared across the library.

The CLI maps these onto its exit-code contract: parameter/domain/window
problems exit 2, numeric/resolution/inconclusive problems exit 3.
"""


class KolmoError(Exception):
    """Base class for all library errors."""


class ParameterError(KolmoError):
    """Invalid sizes, exponents, schedules or other call parameters."""


class DomainError(KolmoError):
    """A point lies outside the domain an operation is defined on."""


class WindowError(KolmoError):
    """A cutoff exceeds the sampled window of a signal."""


class NumericError(KolmoError):
    """Non-finite or divergent values encountered during evaluation."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ResolutionError(KolmoError):
    """A requested scale falls below the resolution of the active grid."""


class InconclusiveError(KolmoError):
    """A certificate could not be produced within the configured depth."""
