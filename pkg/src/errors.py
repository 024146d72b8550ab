"""
Exception hierarchy for the GWE toolkit.

Each error also derives from the builtin it refines, so callers that only
know about ValueError / ArithmeticError keep working.
"""
from typing import Optional


class GweError(Exception):
    """Base class for all toolkit errors."""


class ParameterDomainError(GweError, ValueError):
    """Family parameters, weight exponent or rank outside their valid domain."""


class DomainError(GweError, ValueError):
    """Argument outside the domain of an operation (e.g. u not in (0, 1))."""


class IntegrandEvaluationError(GweError, ArithmeticError):
    """An integrand returned NaN or an infinite value."""

    def __init__(self, message: str, abscissa: Optional[float] = None):
        """
        Initialize the error.

        Args:
            message: Human readable description
            abscissa: Point at which the integrand misbehaved
        """
        super().__init__(message)
        self.abscissa = abscissa


class InsufficientDataError(GweError, ValueError):
    """Too few simulated cycles for a goodness-of-fit check."""


class DegenerateRatioError(GweError, ZeroDivisionError):
    """A ratio of GWE values has a zero denominator."""


class ConfigError(GweError, ValueError):
    """Invalid command-line flags, config file or environment value."""


class ReportValidationError(GweError, ValueError):
    """A JSON report does not match its versioned schema."""
