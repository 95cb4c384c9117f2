"""Greatest convex minorants on 1D grids, used as a property-test oracle."""

from .envelope import is_grid_convex, lower_convex_envelope, pgcm_continuity_probe, pgcm_slice_check
from .models import ContinuityReport, GridFunction, SliceReport

__all__ = [
    "is_grid_convex",
    "lower_convex_envelope",
    "pgcm_continuity_probe",
    "pgcm_slice_check",
    "ContinuityReport",
    "GridFunction",
    "SliceReport",
]
