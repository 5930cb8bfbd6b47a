"""Neron-Severi Lie algebras of Soergel modules, with the supporting calculus.

Exact-arithmetic computations for finite Weyl groups: Bruhat order,
Kazhdan-Lusztig polynomials, Chevalley-formula Schubert calculus,
Bott-Samelson modules with idempotent splitting, sl2 triples and weight
filtrations, bracket closures of ample weight actions, and the directed
graph criterion for maximality.
"""

__version__ = "0.1.0"

from .coxeter import (
    CoxeterSystem,
    GroupElement,
    build_system,
    bruhat_leq,
    descent_sets,
    lower_interval,
    multiply,
    word_to_element,
)
from .laurent import LaurentPoly

__all__ = [
    "CoxeterSystem",
    "GroupElement",
    "build_system",
    "bruhat_leq",
    "descent_sets",
    "lower_interval",
    "multiply",
    "word_to_element",
    "LaurentPoly",
    "__version__",
]
