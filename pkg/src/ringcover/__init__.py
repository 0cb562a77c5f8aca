"""Finite rings covered by proper subrings.

Submodules: ``ring`` (structure constants), ``lattice`` (subrings,
ideals, isomorphism), ``covering`` (good tuples, covering numbers,
classification), ``catalog`` (the ten good rings), ``gfq`` (finite
fields and linear algebra) and ``matring`` (covers of M_n(q)).
"""
from ._accel import backend
from .ring import FiniteRing, load_ring, make_ring, save_ring

__version__ = "0.1.0"

__all__ = ["FiniteRing", "backend", "load_ring", "make_ring", "save_ring", "__version__"]
