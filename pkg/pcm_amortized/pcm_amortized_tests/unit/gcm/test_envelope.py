"""Tests for grid convex envelopes and slice checks."""

import numpy as np
import pytest

from pcm_amortized.gcm import (
    GridFunction,
    is_grid_convex,
    lower_convex_envelope,
    pgcm_continuity_probe,
    pgcm_slice_check,
)
from pcm_amortized.numerics import ContractViolation

US = np.linspace(-1.0, 1.0, 201)


def wavy(X, U):
    """``x^2 + u^2 + sin(2 pi u)``, the scalar benchmark objective."""
    return X[:, 0] ** 2 + U[:, 0] ** 2 + np.sin(2.0 * np.pi * U[:, 0])


class TestGridFunction:
    """Test grid validation."""

    def test_needs_increasing_points(self):
        """Unsorted grids are rejected."""
        with pytest.raises(ContractViolation):
            GridFunction([0.0, 2.0, 1.0], [0.0, 0.0, 0.0])

    def test_needs_matching_lengths(self):
        """Values must match the grid."""
        with pytest.raises(ContractViolation):
            GridFunction([0.0, 1.0], [0.0])


class TestLowerConvexEnvelope:
    """Test the greatest convex minorant."""

    def test_convex_input_unchanged(self):
        """A convex function is its own envelope."""
        g = GridFunction(US, US**2)
        np.testing.assert_array_equal(lower_convex_envelope(g).fs, g.fs)

    def test_minorant_and_convex(self):
        """The envelope lies below the samples and is convex."""
        g = GridFunction(US, US**2 + np.sin(2.0 * np.pi * US))
        envelope = lower_convex_envelope(g)
        assert np.all(envelope.fs <= g.fs)
        assert is_grid_convex(envelope, 1e-12)

    def test_idempotent(self):
        """Taking the envelope twice changes nothing."""
        g = GridFunction(US, np.cos(5.0 * US) + US)
        once = lower_convex_envelope(g)
        np.testing.assert_allclose(lower_convex_envelope(once).fs, once.fs, rtol=0, atol=1e-12)

    def test_greatest(self):
        """The envelope dominates a known convex minorant."""
        fs = np.abs(US) + 0.3 * np.sin(9.0 * US)
        minorant = np.abs(US) - 0.3
        envelope = lower_convex_envelope(GridFunction(US, fs))
        assert np.all(envelope.fs >= minorant - 1e-12)

    def test_double_well(self):
        """The envelope of a double well is flat between the wells."""
        g = GridFunction(US, (US**2 - 0.25) ** 2)
        envelope = lower_convex_envelope(g)
        between = np.abs(US) <= 0.5
        np.testing.assert_allclose(envelope.fs[between], 0.0, atol=1e-15)


class TestSliceChecks:
    """Test slice minimum checks and the continuity probe."""

    def test_slice_minimum_preserved(self):
        """Minimum and argmin survive the envelope exactly."""
        report = pgcm_slice_check(wavy, np.array([0.4]), US)
        assert report.passed
        assert report.f_min == report.envelope_min

    def test_is_grid_convex(self):
        """Non-convex samples are detected."""
        assert not is_grid_convex(GridFunction(US, np.sin(6.0 * US)))

    def test_continuity_probe(self):
        """Envelope distances shrink with the parameter separation."""
        base = np.array([0.2])
        pairs = [(base, base + delta) for delta in (0.1, 0.01, 0.001)]
        report = pgcm_continuity_probe(wavy, pairs, US)
        assert report.non_increasing
        assert report.separations[0] == pytest.approx(0.1)
        assert report.distances[-1] < report.distances[0]
