"""Exact arithmetic for divergence-free Lie algebras of generalized Witt type.

The algebra A = Q[t_1..t_{l1+l2}] (x) Q[Gamma] carries derivations d_1..d_l;
W = A.D is a Lie algebra under the commutator and S is the subalgebra of
elements whose x^{-rho}-twisted divergence vanishes.
"""

from .algebra import AlgebraElement, AlgebraParams, DerivationVector, pairing
from .errors import DivFreeError
from .expr import format_element, parse
from .lattice import GroupElement, Lattice, canonicalize
from .witt import WittElement, bracket, divergence, dpq, dpq_expanded, is_in_S

__all__ = [
    "AlgebraElement",
    "AlgebraParams",
    "DerivationVector",
    "DivFreeError",
    "GroupElement",
    "Lattice",
    "WittElement",
    "bracket",
    "canonicalize",
    "divergence",
    "dpq",
    "dpq_expanded",
    "format_element",
    "is_in_S",
    "pairing",
    "parse",
]

__version__ = "0.1.0"
