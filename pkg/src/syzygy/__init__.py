"""Koszul cohomology of plane curves over prime fields."""

__version__ = "0.1.0"
