"""Exact and numerical checks for genus-3 Green–Griffiths invariants."""

__version__ = "0.1.0"
