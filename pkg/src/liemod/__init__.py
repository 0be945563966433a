"""Exact computations with representations up to homotopy of Lie algebras."""

from .kernels import BACKEND

__version__ = "0.1.0"
