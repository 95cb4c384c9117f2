"""Parameterized convex minorant approximators for amortized optimization.

Dagster definitions live in :mod:`pcm_amortized.definitions`; the command
line lives in :mod:`pcm_amortized.cli`.
"""

__version__ = "0.1.0"
