"""Closed geodesics on hyperbolic surfaces: lengths, self-intersection and covers."""
__version__ = "0.1.0"
