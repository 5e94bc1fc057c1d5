"""Forman and Ollivier curvature on weighted graphs and 2-dimensional cell complexes."""

__version__ = "0.1.0"
