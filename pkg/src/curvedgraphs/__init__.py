"""Exact computation of stub graph homology and characteristic classes
of curved cyclic infinity-algebras, over the rationals."""

__version__ = "0.1.0"
