"""Analyse constraint models and generate solvers specialised to them."""

__version__ = "0.1.0"
