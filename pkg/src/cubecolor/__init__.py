"""Exact and asymptotic tools for proper colorings of the hypercube."""

__version__ = "0.1.0"
