"""Disc polynomials, weighted poly-Bergman kernels and projections on the unit disc."""

__version__ = "1.0.0"
