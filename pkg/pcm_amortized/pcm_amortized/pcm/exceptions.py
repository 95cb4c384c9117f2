"""Custom exceptions for training and evaluation."""

from typing import Optional


class TrainingError(Exception):
    """Base exception for training errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} (details: {self.details})"
        return self.message


class TrainingDivergedError(TrainingError):
    """Raised when the training loss or gradient becomes non-finite."""

    def __init__(
        self,
        epoch: int,
        batch: int,
        parameter_norm: float,
        message: Optional[str] = None,
    ):
        full_message = message or f"Training diverged at epoch {epoch}, batch {batch}"
        super().__init__(
            full_message,
            {"epoch": epoch, "batch": batch, "parameter_norm": parameter_norm},
        )
        self.epoch = epoch
        self.batch = batch
        self.parameter_norm = parameter_norm


class EmptySplitError(TrainingError, ValueError):
    """Raised when a dataset split needed for training or evaluation is empty."""

    def __init__(self, split: str, message: Optional[str] = None):
        super().__init__(message or f"Dataset split '{split}' is empty", {"split": split})
        self.split = split
