"""Numerical laboratory for Bergman-type integral operators on the unit ball."""

__version__ = "0.1.0"
