"""Value types for the grid convex-minorant oracle."""

from dataclasses import dataclass

import numpy as np

from ..numerics import ContractViolation


@dataclass(frozen=True)
class GridFunction:
    """Samples ``fs`` of a 1D function at strictly increasing points ``us``."""

    us: np.ndarray
    fs: np.ndarray

    def __post_init__(self) -> None:
        """Validate the grid."""
        us = np.asarray(self.us, dtype=np.float64).reshape(-1)
        fs = np.asarray(self.fs, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "us", us)
        object.__setattr__(self, "fs", fs)
        if us.size < 2 or us.size != fs.size:
            raise ContractViolation(
                "a grid function needs at least 2 points and matching lengths",
                {"us": us.size, "fs": fs.size},
            )
        if not np.all(np.diff(us) > 0):
            raise ContractViolation("grid points must be strictly increasing")
        if not (np.all(np.isfinite(us)) and np.all(np.isfinite(fs))):
            raise ContractViolation("grid points and values must be finite")

    def __len__(self) -> int:
        return self.us.size


@dataclass(frozen=True)
class SliceReport:
    """Minimum and argmin comparison of one slice with its envelope.

    Attributes:
        f_min: Grid minimum of the slice
        envelope_min: Grid minimum of the envelope
        argmin_f: Grid indices attaining ``f_min``
        argmin_envelope: Grid indices attaining ``envelope_min``
        minima_equal: ``|f_min - envelope_min| <= tolerance``
        argmin_included: Every index of ``argmin_f`` is in ``argmin_envelope``
    """

    f_min: float
    envelope_min: float
    argmin_f: np.ndarray
    argmin_envelope: np.ndarray
    minima_equal: bool
    argmin_included: bool

    @property
    def passed(self) -> bool:
        return self.minima_equal and self.argmin_included


@dataclass(frozen=True)
class ContinuityReport:
    """Sup-distance between envelope slices at nearby parameters.

    ``separations`` are sorted in decreasing order with ``distances`` aligned.
    """

    separations: np.ndarray
    distances: np.ndarray
    non_increasing: bool
