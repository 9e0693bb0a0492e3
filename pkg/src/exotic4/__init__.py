"""Exact-arithmetic checks for small exotic 4-manifolds with b2+ = 3."""

__version__ = "0.1.0"
