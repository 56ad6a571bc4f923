"""Numerical and exact verification of weighted quaternionic reductions of spheres."""

__version__ = "0.1.0"
