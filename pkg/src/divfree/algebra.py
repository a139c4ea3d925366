"""The commutative algebra A(l1, l2, l3; Gamma) = Q[t_1..t_{l1+l2}] (x) Q[Gamma],
its basic derivations d_1..d_l, the pairing of derivations with Gamma and the
subspaces D_alpha.

Monomials t^i x^alpha are keys ``(alpha, ivec)`` with ``alpha`` a tuple of
Fractions (raw coordinates in Q^{l2+l3}) and ``ivec`` a tuple of ints.
Derivation indices ``p`` are 1-based, as in the mathematics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Sequence

from . import qq
from .errors import IndexOutOfRange, LengthMismatch, NotInGamma, ParamsMismatch, DivFreeError
from .lattice import Lattice, canonicalize
from .linalg import dense_kernel, kernel


@dataclass(frozen=True)
class AlgebraParams:
    """The data (l1, l2, l3, Gamma, rho) naming one algebra S(l1,l2,l3; rho, Gamma)."""

    l1: int
    l2: int
    l3: int
    gamma: Lattice
    rho: tuple = field(default=None)

    def __post_init__(self):
        if min(self.l1, self.l2, self.l3) < 0:
            raise DivFreeError("l1, l2, l3 must be nonnegative")
        if self.ell <= 0:
            raise DivFreeError("l = l1 + l2 + l3 must be positive")
        if self.gamma.dim != self.n:
            raise LengthMismatch(f"Gamma must live in Q^{self.n}, got dimension {self.gamma.dim}")
        rho = qq.zeros(self.n) if self.rho is None else qq.qvec(self.rho)
        if len(rho) != self.n:
            raise LengthMismatch(f"rho must have {self.n} entries")
        if rho not in self.gamma:
            raise NotInGamma(f"rho={tuple(map(qq.fmt_q, rho))} is not in Gamma")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def make(cls, l1: int, l2: int, l3: int, gamma_gens=None, rho=None) -> "AlgebraParams":
        n = l2 + l3
        if gamma_gens is None:
            gamma = Lattice.standard(n) if n else Lattice.trivial()
        elif isinstance(gamma_gens, Lattice):
            gamma = gamma_gens
        else:
            gamma = canonicalize(gamma_gens, dim=n)
        return cls(l1, l2, l3, gamma, rho)

    @property
    def ell(self) -> int:
        return self.l1 + self.l2 + self.l3

    @property
    def n(self) -> int:
        """Dimension of the ambient space of Gamma."""
        return self.l2 + self.l3

    @property
    def m(self) -> int:
        """Number of polynomial variables t_1..t_{l1+l2}."""
        return self.l1 + self.l2

    @property
    def shape(self) -> tuple:
        return (self.l1, self.l2, self.l3)

    def with_rho(self, rho) -> "AlgebraParams":
        return AlgebraParams(self.l1, self.l2, self.l3, self.gamma, rho)

    def check_index(self, p: int) -> None:
        if not 1 <= p <= self.ell:
            raise IndexOutOfRange(f"derivation index {p} outside 1..{self.ell}")

    def check_monomial(self, alpha, ivec) -> None:
        if len(alpha) != self.n:
            raise LengthMismatch(f"x-exponent needs {self.n} entries, got {len(alpha)}")
        if len(ivec) != self.m:
            raise LengthMismatch(f"t-exponent needs {self.m} entries, got {len(ivec)}")
        if any(i < 0 for i in ivec):
            raise DivFreeError("t-exponents must be nonnegative")
        if alpha not in self.gamma:
            raise NotInGamma(f"x-exponent {tuple(map(qq.fmt_q, alpha))} is not in Gamma")


def same_params(a: AlgebraParams, b: AlgebraParams) -> None:
    if a is not b and a != b:
        raise ParamsMismatch("elements belong to different algebras")


def mono_key(key):
    """Global monomial order: alpha coordinates, then t-exponents (then d-index)."""
    return key


def partial_monomial(params: AlgebraParams, p: int, alpha: tuple, ivec: tuple):
    """d_p applied to x^{alpha, ivec}: a list of (coefficient, alpha, ivec)."""
    out = []
    l1, m = params.l1, params.m
    if p > l1:
        a = alpha[p - l1 - 1]
        if a:
            out.append((a, alpha, ivec))
    if p <= m:
        i = ivec[p - 1]
        if i:
            lowered = ivec[: p - 1] + (i - 1,) + ivec[p:]
            out.append((Fraction(i), alpha, lowered))
    return out


def _accumulate(terms: Dict, key, c) -> None:
    nv = terms.get(key, 0) + c
    if nv:
        terms[key] = nv
    else:
        terms.pop(key, None)


class AlgebraElement:
    """Sparse Q-linear combination of monomials t^i x^alpha."""

    __slots__ = ("params", "terms")

    def __init__(self, params: AlgebraParams, terms=None, check: bool = True):
        self.params = params
        clean = {}
        for (alpha, ivec), c in (terms or {}).items():
            alpha, ivec, c = qq.qvec(alpha), tuple(int(i) for i in ivec), qq.q(c)
            if check:
                params.check_monomial(alpha, ivec)
            _accumulate(clean, (alpha, ivec), c)
        self.terms = clean

    @classmethod
    def _raw(cls, params, terms):
        obj = cls.__new__(cls)
        obj.params = params
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, params):
        return cls._raw(params, {})

    @classmethod
    def one(cls, params):
        return cls.monomial(params, qq.zeros(params.n), (0,) * params.m)

    @classmethod
    def monomial(cls, params, alpha, ivec=None, coeff=1):
        ivec = (0,) * params.m if ivec is None else ivec
        return cls(params, {(alpha, ivec): coeff})

    @classmethod
    def constant(cls, params, c):
        return cls(params, {(qq.zeros(params.n), (0,) * params.m): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.params == other.params and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __neg__(self):
        return AlgebraElement._raw(self.params, {k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        same_params(self.params, other.params)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(terms, k, c)
        return AlgebraElement._raw(self.params, terms)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        c = qq.q(c)
        if not c:
            return AlgebraElement.zero(self.params)
        return AlgebraElement._raw(self.params, {k: c * v for k, v in self.terms.items()})

    def shift(self, beta) -> "AlgebraElement":
        """Multiply by x^beta (beta must lie in Gamma)."""
        beta = qq.qvec(beta)
        if not any(beta):
            return self
        return AlgebraElement._raw(self.params, {(qq.vadd(a, beta), i): c for (a, i), c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: mono_key(kv[0]))

    def __repr__(self):
        from .expr import format_element

        return f"AlgebraElement({format_element(self)!r})"


def multiply(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    same_params(u.params, v.params)
    terms: Dict = {}
    for (a1, i1), c1 in u.terms.items():
        for (a2, i2), c2 in v.terms.items():
            key = (qq.vadd(a1, a2), tuple(x + y for x, y in zip(i1, i2)))
            _accumulate(terms, key, c1 * c2)
    return AlgebraElement._raw(u.params, terms)


def apply_basic_derivation(p: int, u: AlgebraElement) -> AlgebraElement:
    """d_p(u): t-partials for p <= l1, eigen-derivation plus t-partial for the
    next l2 indices, eigen-derivation alone for the last l3."""
    params = u.params
    params.check_index(p)
    terms: Dict = {}
    for (alpha, ivec), c in u.terms.items():
        for coef, a2, i2 in partial_monomial(params, p, alpha, ivec):
            _accumulate(terms, (a2, i2), c * coef)
    return AlgebraElement._raw(params, terms)


@dataclass(frozen=True)
class DerivationVector:
    """An element sum a_p d_p of the span D of the basic derivations."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", qq.qvec(self.coeffs))

    @classmethod
    def basic(cls, ell: int, p: int) -> "DerivationVector":
        if not 1 <= p <= ell:
            raise IndexOutOfRange(f"derivation index {p} outside 1..{ell}")
        return cls(tuple(int(k == p) for k in range(1, ell + 1)))

    @classmethod
    def zero(cls, ell: int) -> "DerivationVector":
        return cls((0,) * ell)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, p: int) -> Fraction:
        """1-based coefficient a_p (the projection chi_p)."""
        return self.coeffs[p - 1]

    def __add__(self, other):
        return DerivationVector(qq.vadd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return DerivationVector(qq.vsub(self.coeffs, other.coeffs))

    def __rmul__(self, c):
        return DerivationVector(qq.vscale(qq.q(c), self.coeffs))

    def __neg__(self):
        return DerivationVector(tuple(-a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self):
        return [p for p, a in enumerate(self.coeffs, start=1) if a]


def apply_derivation(d: DerivationVector, u: AlgebraElement) -> AlgebraElement:
    if len(d) != u.params.ell:
        raise ParamsMismatch(f"derivation vector of length {len(d)} for an algebra with l={u.params.ell}")
    out = AlgebraElement.zero(u.params)
    for p in d.support():
        out = out + apply_basic_derivation(p, u).scale(d[p])
    return out


def pairing(d: DerivationVector, alpha: Sequence) -> Fraction:
    """<d, alpha>: pairs the last l2+l3 coefficients of d with alpha."""
    alpha = qq.qvec(alpha)
    l1 = len(d) - len(alpha)
    if l1 < 0:
        raise LengthMismatch("vector longer than the derivation vector")
    return qq.dot(d.coeffs[l1:], alpha)


def d_alpha_basis(params: AlgebraParams, alpha) -> list:
    """Echelon basis of the subspace D_alpha of D."""
    alpha = qq.qvec(alpha)
    if len(alpha) != params.n:
        raise LengthMismatch(f"alpha needs {params.n} entries")
    if alpha not in params.gamma:
        raise NotInGamma(f"{tuple(map(qq.fmt_q, alpha))} is not in Gamma")
    ell, l1 = params.ell, params.l1
    if not any(alpha):
        if params.m == 0:
            return []
        if params.m == 1:
            return [DerivationVector.basic(ell, p) for p in range(params.m + 1, ell + 1)]
    functional = [Fraction(0)] * l1 + list(alpha)
    if not any(functional):
        return [DerivationVector.basic(ell, p) for p in range(1, ell + 1)]
    return [DerivationVector(v) for v in dense_kernel([functional])]


def in_d_alpha(params: AlgebraParams, d: DerivationVector, alpha) -> bool:
    """Membership of d in D_alpha (all three cases)."""
    basis = d_alpha_basis(params, alpha)
    if d.is_zero():
        return True
    from .linalg import Echelon

    ech = Echelon()
    for b in basis:
        ech.add(dict(enumerate(b.coeffs)))
    return ech.contains({j: c for j, c in enumerate(d.coeffs) if c})


def exponent_vectors(m: int, max_level: int):
    """All i in N^m with |i| <= max_level, in increasing graded-lex order."""
    out = [iv for iv in itertools.product(range(max_level + 1), repeat=m) if sum(iv) <= max_level]
    return sorted(out, key=lambda iv: (sum(iv), iv))


def joint_kernel_check(params: AlgebraParams, max_degree: int, box: Iterable) -> bool:
    """True iff, on monomials x^{alpha,i} with alpha in ``box`` and
    |i| <= max_degree, the common kernel of d_1..d_l is the constants."""
    box = [qq.qvec(a) for a in box]
    zero = qq.zeros(params.n)
    if zero not in box:
        raise DivFreeError("the truncation box must contain 0")
    for a in box:
        params.check_monomial(a, (0,) * params.m)
    domain = [(a, iv) for a in sorted(set(box)) for iv in exponent_vectors(params.m, max_degree)]
    images = []
    for alpha, ivec in domain:
        img = {}
        for p in range(1, params.ell + 1):
            for coef, a2, i2 in partial_monomial(params, p, alpha, ivec):
                _accumulate(img, (p, a2, i2), coef)
        images.append(img)
    ker = kernel(images)
    if len(ker) != 1:
        return False
    (vec,) = ker
    return set(vec) == {domain.index((zero, (0,) * params.m))}
