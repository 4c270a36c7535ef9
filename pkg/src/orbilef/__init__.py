"""Orbifold Lefschetz numbers for covariant pairs on proper affine actions."""
from orbilef.kernels import BACKEND

__version__ = "0.1.0"
