"""Exact certification toolkit for density properties of surfaces x^2*y = a(z) + x*b(z)."""

__version__ = "0.1.0"
