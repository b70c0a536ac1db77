"""Exception types raised by the library."""


class LenqdError(Exception):
    """Base class for all library errors."""


class DomainError(LenqdError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(DomainError):
    """The requested enumeration is too large to carry out."""


class DegenerateInputError(DomainError):
    """The input makes a ratio or normalisation undefined."""


class ConfigError(LenqdError, ValueError):
    """A simulation configuration cannot be run."""


class PSDViolationError(LenqdError, ArithmeticError):
    """A quadratic form that must be nonnegative came out negative."""
