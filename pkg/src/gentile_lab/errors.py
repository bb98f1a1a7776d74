"""Exception hierarchy shared by the kernels and the CLI."""


class GentileLabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GentileLabError, ValueError):
    """An argument lies outside the domain of a formula."""


class EnumerationCapError(GentileLabError, ValueError):
    """Explicit enumeration was requested above the configured cap."""


class InfeasibleError(GentileLabError):
    """An exact computation exceeds the configured size limit."""


class ConvergenceError(GentileLabError, RuntimeError):
    """An iterative solver failed to reach its tolerance."""


class BracketError(ConvergenceError):
    """A root could not be bracketed."""


class TruncationError(ConvergenceError):
    """A level sum could not be certified within the allowed level count."""
