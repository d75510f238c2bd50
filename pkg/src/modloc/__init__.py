"""Modular localization in finite-dimensional and lattice models."""
from . import causal1d, modular, realspace, symplectic

__version__ = "0.1.0"
__all__ = ["causal1d", "modular", "realspace", "symplectic"]
