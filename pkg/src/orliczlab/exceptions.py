"""Exception types raised across the package."""


class OrliczError(Exception):
    """Base class for domain errors."""


class DomainOverflow(OrliczError, ValueError):
    """An argument exceeds the overflow-safe domain of a Young function."""


class SpaceMismatch(OrliczError, ValueError):
    """Functions or sets do not live on the same atomic space."""


class NullSet(OrliczError, ValueError):
    """A set has zero quasi-norm where a non-null set is required."""


class PreconditionViolation(OrliczError, ValueError):
    pass


class MethodInapplicable(OrliczError, ValueError):
    pass


class NonConvergence(OrliczError, RuntimeError):
    """An iterative method hit its cap; ``best`` holds the best value found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SizeExceeded(OrliczError, ValueError):
    pass


class NotFound(OrliczError, RuntimeError):
    pass


class InvalidYoungFunction(OrliczError, ValueError):
    """Raised by :func:`orliczlab.young.validate`; carries every diagnostic."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


class UnknownFilter(OrliczError, KeyError):
    pass
