"""Commutative algebraic monoid structures on affine spaces.

Exact polynomial arithmetic over Q, locally nilpotent derivations and their
exponentials, a catalog of commutative monoids on A^n, normal forms for
commuting pairs of derivations on graded K[x1, x2, x3], and structure checks
(idempotents, nilpotents, group-like powers).
"""

from .catalog import (AlgebraStructureConstants, FamilyDescriptor, make_A3, make_bilinear,
                      make_corank1, make_hirzebruch, make_rank0, make_toric,
                      make_truncated_poly_algebra, q_poly)
from .derivations import Derivation, Grading, PolyAutomorphism, exp_action
from .monoids import MonoidStructure, monoid_from_action, verify_all
from .polycore import Poly, PolyMap, Ring

__version__ = "0.1.0"

__all__ = [
    "AlgebraStructureConstants", "Derivation", "FamilyDescriptor", "Grading", "MonoidStructure",
    "Poly", "PolyAutomorphism", "PolyMap", "Ring", "exp_action", "make_A3", "make_bilinear",
    "make_corank1", "make_hirzebruch", "make_rank0", "make_toric",
    "make_truncated_poly_algebra", "monoid_from_action", "q_poly", "verify_all",
]
