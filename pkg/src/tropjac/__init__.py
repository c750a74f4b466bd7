"""Tropical Jacobians of curves, and back."""

__version__ = "0.1.0"
