"""Result types shared by the experiment runners."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one gradient or property suite.

    Attributes:
        suite: Suite name
        cases: Number of checked cases
        failures: Cases outside ``tolerance``
        max_error: Largest observed error (NaN when not applicable)
        tolerance: Acceptance threshold
    """

    suite: str
    cases: int
    failures: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failures == 0

    @classmethod
    def from_errors(cls, suite: str, errors, tolerance: float) -> "SuiteResult":
        """Suite result from per-case errors; a case fails if its error exceeds ``tolerance``."""
        errors = np.asarray(list(errors), dtype=np.float64)
        failures = int(np.sum(~(errors <= tolerance)))
        max_error = float(np.max(errors)) if errors.size else float("nan")
        return cls(suite, int(errors.size), failures, max_error, tolerance)


def report_frame(results: list[SuiteResult]) -> pd.DataFrame:
    """Rows ``suite, cases, failures, max_error, tolerance, passed``."""
    return pd.DataFrame({
        "suite": [r.suite for r in results],
        "cases": [r.cases for r in results],
        "failures": [r.failures for r in results],
        "max_error": [r.max_error for r in results],
        "tolerance": [r.tolerance for r in results],
        "passed": [r.passed for r in results],
    })


@dataclass
class ExperimentOutcome:
    """What a run produced and which models or suites failed."""

    artifacts: list[Path] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures
