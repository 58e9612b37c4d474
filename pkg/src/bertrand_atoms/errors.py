"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(DomainError):
    """The operation was asked to evaluate at a singular point (pole, origin, ...)."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to converge or to bracket its target."""


class SearchWindowError(ConvergenceError):
    """Bracketing failed inside the allowed parameter window.

    ``diagnostics`` carries whatever the search learned (window, counts, ...).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NotAnEigenvalueError(ConvergenceError):
    """The supplied coupling does not satisfy the matching condition."""


class UnsupportedModelError(DomainError):
    """The requested model variant is not implemented."""


class ZeroConformalFactorError(SingularityError, ZeroDivisionError):
    """A Staeckel transform was requested where its conformal factor vanishes."""
