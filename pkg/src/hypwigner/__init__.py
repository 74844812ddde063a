"""Wigner transform and Weyl calculus on the interval, the Poincare disc and Ball(n)."""
from .geometry import Model, MoebiusMap, Rotation

__version__ = "0.1.0"

__all__ = ["Model", "MoebiusMap", "Rotation", "__version__"]
