"""Degree growth, Green functions and equilibrium measures of rational maps."""

__version__ = "0.1.0"
