"""Combinatorial homotopy of global actions and groupoid atlases."""

__version__ = "0.1.0"
