"""Custom exceptions for the numeric kernels.

This module defines the error types raised by the shared kernels and
re-used by every other package for precondition failures.
"""

from typing import Optional


class NumericsError(Exception):
    """Base exception for numeric kernel errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        """Initialize numerics error.

        Args:
            message: Error message
            details: Additional error details
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        """Return error string representation."""
        if self.details:
            return f"{self.message} (details: {self.details})"
        return self.message


class NumericDomainError(NumericsError, ValueError):
    """Raised when an input lies outside the mathematical domain of a kernel."""

    def __init__(
        self,
        message: str = "Input outside the kernel domain",
        details: Optional[dict] = None,
    ):
        super().__init__(message, details)


class ContractViolation(NumericsError, ValueError):
    """Raised when a caller breaks a precondition (shapes, states, flags)."""

    def __init__(
        self,
        message: str = "Precondition violated",
        details: Optional[dict] = None,
    ):
        super().__init__(message, details)
