"""Exception hierarchy. Every error maps to a distinct CLI exit code."""


class X0NError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParseError(X0NError):
    """Initial-term text does not match the grammar; carries a position."""

    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NonPositiveExponent(X0NError):
    exit_code = 3


class ZeroConstant(X0NError):
    exit_code = 4


class LevelNotFound(X0NError):
    exit_code = 5


class LogarithmicTerm(X0NError):
    """A nonzero x^-1 term reached the integrator: invalid seed or truncation bug."""

    exit_code = 6


class InsufficientOuterOrder(X0NError):
    """Outer series too short for the requested substitution order."""

    exit_code = 7


class RingMismatch(X0NError):
    exit_code = 8


class NonUnitLeadingCoefficient(X0NError):
    exit_code = 9


class BadConstantTerm(X0NError):
    exit_code = 10


class InnerNotSmall(X0NError):
    """Composition inner series has a nonzero constant term."""

    exit_code = 11


class ConductorMismatch(X0NError):
    exit_code = 12


class DivisionByZero(X0NError, ZeroDivisionError):
    exit_code = 13


class ZeroSeries(X0NError):
    exit_code = 14


class NotPrime(X0NError):
    exit_code = 15


class PrecisionTooLow(X0NError):
    exit_code = 16


class OracleMismatch(X0NError):
    exit_code = 17


class InsufficientPrecision(X0NError):
    exit_code = 18
