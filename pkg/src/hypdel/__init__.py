"""Hyperbolic surfaces, thick-thin Delaunay triangulations, and genus bounds."""

__version__ = "0.1.0"
