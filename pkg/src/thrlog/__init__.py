"""Combinatorial models for real topological Hochschild homology of log rings.

The package works entirely with exact integer arithmetic: monoids in Z^d with
an involution, truncated dihedral and real simplicial sets built from them,
integer homology by Smith normal form, and total cofibers of cubes.
"""

from .monoid import AffineMonoid, MonoidHom
from .report import CheckReport

__all__ = ["AffineMonoid", "MonoidHom", "CheckReport"]
__version__ = "0.1.0"
