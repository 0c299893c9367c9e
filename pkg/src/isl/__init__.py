"""Invariant-set laboratory: finite-precision qubit strings, CHSH harness, fractal dynamics."""
from .numkit import BitBudget, Dyadic, RationalAngle, fits_budget, niven_classify

__version__ = "0.1.0"
