"""Leading terms and the filtration of S by t-degree.

Exponent vectors are compared by total level first, then lexicographically;
the order is also used on Z-vectors (negative entries allowed).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

from . import qq
from .algebra import AlgebraParams, DerivationVector, d_alpha_basis, in_d_alpha
from .errors import AdmissibilityViolated, LengthMismatch, NotInDAlphaRho, NotInGamma, ZeroPart
from .witt import WittElement, dpq_expanded, grade_decompose


def degree_key(ivec: Sequence[int]) -> tuple:
    return (sum(ivec), tuple(ivec))


def compare_degree(i: Sequence[int], j: Sequence[int]) -> int:
    """-1, 0 or 1 as i <, =, > j in the graded lexicographic order."""
    if len(i) != len(j):
        raise LengthMismatch(f"exponent vectors of lengths {len(i)} and {len(j)}")
    a, b = degree_key(i), degree_key(j)
    return (a > b) - (a < b)


@dataclass(frozen=True)
class LeadingData:
    degree: tuple
    level: int
    direction: DerivationVector


def leading_term(u: WittElement, alpha) -> LeadingData:
    """Top exponent vector of the alpha-homogeneous part of u and the
    derivation it multiplies."""
    alpha = qq.qvec(alpha)
    part = {k: c for k, c in u.terms.items() if k[0] == alpha}
    if not part:
        raise ZeroPart(f"u has no component of degree {tuple(map(qq.fmt_q, alpha))}")
    top = max((k[1] for k in part), key=degree_key)
    coeffs = [Fraction(0)] * u.params.ell
    for (a, ivec, p), c in part.items():
        if ivec == top:
            coeffs[p - 1] += c
    return LeadingData(top, sum(top), DerivationVector(coeffs))


def filtration_member(u: WittElement, ivec: Sequence[int]) -> bool:
    """True iff every homogeneous part of u has leading degree <= ivec."""
    bound = degree_key(ivec)
    if len(ivec) != u.params.m:
        raise LengthMismatch(f"exponent vector needs {u.params.m} entries")
    return all(degree_key(k[1]) <= bound for k in u.terms)


def _lift(ivec, k, by=1):
    return ivec[: k - 1] + (ivec[k - 1] + by,) + ivec[k:]


def admissible(params: AlgebraParams, alpha, ivec, d: DerivationVector) -> bool:
    """Whether some element of S_alpha has leading term x^{alpha,ivec} d."""
    try:
        _check_admissible(params, qq.qvec(alpha), tuple(ivec), d)
    except (NotInDAlphaRho, AdmissibilityViolated):
        return False
    return True


def _check_admissible(params, alpha, ivec, d):
    if len(d) != params.ell:
        raise LengthMismatch(f"derivation vector needs {params.ell} entries")
    if len(ivec) != params.m or any(i < 0 for i in ivec):
        raise LengthMismatch(f"exponent vector needs {params.m} nonnegative entries")
    if alpha not in params.gamma:
        raise NotInGamma(f"{tuple(map(qq.fmt_q, alpha))} is not in Gamma")
    if d.is_zero():
        raise NotInDAlphaRho("the direction of a leading term must be nonzero")
    shifted = qq.vsub(alpha, params.rho)
    if not in_d_alpha(params, d, shifted):
        raise NotInDAlphaRho("direction is not in D_{alpha - rho}")
    m = params.m
    if not any(shifted) and ivec[m - 1] != 0 and d[m] != 0:
        raise AdmissibilityViolated(
            f"at alpha = rho the top variable t{m} and the direction d{m} cannot both appear"
        )


def build_with_leading_term(params: AlgebraParams, alpha, ivec, d: DerivationVector) -> WittElement:
    """A fixed element of S_alpha whose leading term is x^{alpha, ivec} d.

    Off rho it is a scaled combination of generators against the first index
    q where alpha and rho differ; at alpha = rho the direction is split into
    its d_{l1+l2} component and the rest, each built from a raised monomial.
    """
    alpha, ivec = qq.qvec(alpha), tuple(int(i) for i in ivec)
    _check_admissible(params, alpha, ivec, d)
    l1, m = params.l1, params.m
    shifted = qq.vsub(alpha, params.rho)
    out = WittElement.zero(params)
    if any(shifted):
        q = next(k for k in range(l1 + 1, params.ell + 1) if shifted[k - l1 - 1] != 0)
        scale = 1 / shifted[q - l1 - 1]
        for p in d.support():
            out = out + dpq_expanded(params, p, q, alpha, ivec).scale(d[p] * scale)
        return out
    top = d[m]
    rest = d - DerivationVector.basic(params.ell, m).__rmul__(top) if top else d
    if not rest.is_zero():
        raised = _lift(ivec, m)
        scale = Fraction(1, ivec[m - 1] + 1)
        for p in rest.support():
            out = out + dpq_expanded(params, p, m, alpha, raised).scale(rest[p] * scale)
    if top:
        raised = _lift(ivec, 1)
        out = out + dpq_expanded(params, m, 1, alpha, raised).scale(top * Fraction(1, ivec[0] + 1))
    return out


def s_alpha_level0_basis(params: AlgebraParams, alpha) -> List[WittElement]:
    """Basis {x^alpha d : d in basis of D_{alpha - rho}} of the level-zero part
    of S_alpha."""
    alpha = qq.qvec(alpha)
    if alpha not in params.gamma:
        raise NotInGamma(f"{tuple(map(qq.fmt_q, alpha))} is not in Gamma")
    basis = d_alpha_basis(params, qq.vsub(alpha, params.rho))
    zero = (0,) * params.m
    return [
        WittElement._raw(params, {(alpha, zero, p): c for p, c in enumerate(b.coeffs, start=1) if c})
        for b in basis
    ]
