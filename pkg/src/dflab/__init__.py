"""Exact homological algebra over prime fields and the rationals.

Core layers: sparse polynomial rings (`ring`), labeled free modules and
sparse matrices (`linear`), Groebner bases and syzygies (`groebner`),
chain complexes with two homology engines (`complexes`), truncated
simplicial modules with the Dold-Kan functors (`simplicial`), polynomial
functors and cross-effects (`functors`), Koszul complexes (`koszul`),
and end-to-end rank-table pipelines (`scenarios`) behind the ``dflab``
command line tool (`cli`).
"""

__version__ = "0.1.0"

from .ring import PrimeField, Rationals, RingDescriptor, Poly, ring_descriptor

__all__ = [
    "PrimeField",
    "Rationals",
    "RingDescriptor",
    "Poly",
    "ring_descriptor",
    "__version__",
]
