"""Custom exceptions for the solvers."""

from typing import Optional


class SolverError(Exception):
    """Base exception for solver errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} (details: {self.details})"
        return self.message


class NonFiniteObjectiveError(SolverError):
    """Raised when the objective or its gradient evaluates to NaN/inf."""

    def __init__(
        self,
        message: str = "Objective evaluated to a non-finite value",
        details: Optional[dict] = None,
    ):
        super().__init__(message, details)


class GridTooLargeError(SolverError):
    """Raised when a brute-force grid would exceed the point budget."""

    def __init__(self, points: int, limit: int):
        super().__init__(
            f"Grid of {points} points exceeds the limit of {limit}",
            {"points": points, "limit": limit},
        )
        self.points = points
        self.limit = limit


class SolverNotConvergedError(SolverError):
    """Raised when a caller requires a converged solve and did not get one."""

    def __init__(
        self,
        message: str = "Solver did not converge",
        details: Optional[dict] = None,
    ):
        super().__init__(message, details)
