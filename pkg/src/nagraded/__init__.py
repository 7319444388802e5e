"""Exact non-Archimedean graded norms on toric section rings."""

__version__ = "0.1.0"
