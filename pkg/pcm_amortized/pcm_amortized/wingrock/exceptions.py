"""Custom exceptions for the wing-rock plant and its controllers."""

from typing import Optional


class WingRockError(Exception):
    """Base exception for wing-rock simulation errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} (details: {self.details})"
        return self.message


class PropagationError(WingRockError):
    """Raised when state propagation produces a non-finite state."""

    def __init__(self, step: Optional[int] = None, message: Optional[str] = None, details: Optional[dict] = None):
        full_message = message or (
            "State propagation became non-finite"
            if step is None
            else f"State propagation became non-finite at step {step}"
        )
        super().__init__(full_message, {**(details or {}), "step": step})
        self.step = step


class InputConstraintViolation(WingRockError):
    """Raised when a controller returns an input outside the input box."""

    def __init__(self, time: float, value: float, lower: float, upper: float):
        super().__init__(
            f"Controller input {value} at t={time:.3f}s violates [{lower}, {upper}]",
            {"time": time, "value": value, "lower": lower, "upper": upper},
        )
        self.time = time
        self.value = value
        self.lower = lower
        self.upper = upper
