"""The Witt-type Lie algebra W = A.D and its divergence-free subalgebras.

A :class:`WittElement` maps keys ``(alpha, ivec, p)`` to nonzero Fractions;
the key stands for x^{alpha, ivec} d_p.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from . import qq
from .algebra import (
    AlgebraElement,
    AlgebraParams,
    DerivationVector,
    _accumulate,
    apply_basic_derivation,
    partial_monomial,
    same_params,
)
from .errors import IndexOutOfRange, ParamsMismatch
from .linalg import Echelon


class WittElement:
    """Sparse combination of terms x^{alpha, i} d_p."""

    __slots__ = ("params", "terms")

    def __init__(self, params: AlgebraParams, terms=None, check: bool = True):
        self.params = params
        clean: Dict = {}
        for (alpha, ivec, p), c in (terms or {}).items():
            alpha, ivec, c = qq.qvec(alpha), tuple(int(i) for i in ivec), qq.q(c)
            if check:
                params.check_monomial(alpha, ivec)
                params.check_index(p)
            _accumulate(clean, (alpha, ivec, int(p)), c)
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
    def term(cls, params, alpha, ivec, p, coeff=1):
        ivec = (0,) * params.m if ivec is None else ivec
        return cls(params, {(alpha, ivec, p): coeff})

    @classmethod
    def from_parts(cls, params, f: AlgebraElement, d: DerivationVector) -> "WittElement":
        """The product f * d with f in A and d in D."""
        same_params(params, f.params)
        terms: Dict = {}
        for p in d.support():
            for (alpha, ivec), c in f.terms.items():
                _accumulate(terms, (alpha, ivec, p), c * d[p])
        return cls._raw(params, terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, WittElement):
            return self.params == other.params and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __neg__(self):
        return WittElement._raw(self.params, {k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, WittElement):
            return NotImplemented
        same_params(self.params, other.params)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(terms, k, c)
        return WittElement._raw(self.params, terms)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return module_multiply(other, self)
        return NotImplemented

    def scale(self, c):
        c = qq.q(c)
        if not c:
            return WittElement.zero(self.params)
        return WittElement._raw(self.params, {k: c * v for k, v in self.terms.items()})

    def shift(self, beta) -> "WittElement":
        """Multiply by x^beta."""
        beta = qq.qvec(beta)
        if not any(beta):
            return self
        return WittElement._raw(self.params, {(qq.vadd(a, beta), i, p): c for (a, i, p), c in self.terms.items()})

    def component(self, p: int) -> AlgebraElement:
        """The coefficient u_p of d_p."""
        return AlgebraElement._raw(
            self.params, {(a, i): c for (a, i, q), c in self.terms.items() if q == p}
        )

    def support(self) -> set:
        """Gamma-degrees occurring in the element."""
        return {a for (a, _, _) in self.terms}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __repr__(self):
        from .expr import format_element

        return f"WittElement({format_element(self)!r})"


def module_multiply(f: AlgebraElement, u: WittElement) -> WittElement:
    """The A-module action f * u on W."""
    same_params(f.params, u.params)
    terms: Dict = {}
    for (a1, i1), c1 in f.terms.items():
        for (a2, i2, p), c2 in u.terms.items():
            key = (qq.vadd(a1, a2), tuple(x + y for x, y in zip(i1, i2)), p)
            _accumulate(terms, key, c1 * c2)
    return WittElement._raw(u.params, terms)


def bracket(u: WittElement, v: WittElement) -> WittElement:
    """[f d_p, g d_q] = f d_p(g) d_q - g d_q(f) d_p, extended bilinearly."""
    same_params(u.params, v.params)
    params = u.params
    terms: Dict = {}
    for (a1, i1, p), c1 in u.terms.items():
        for (a2, i2, q), c2 in v.terms.items():
            c = c1 * c2
            # f d_p(g) d_q
            for coef, a, i in partial_monomial(params, p, a2, i2):
                key = (qq.vadd(a1, a), tuple(x + y for x, y in zip(i1, i)), q)
                _accumulate(terms, key, c * coef)
            # - g d_q(f) d_p
            for coef, a, i in partial_monomial(params, q, a1, i1):
                key = (qq.vadd(a2, a), tuple(x + y for x, y in zip(i2, i)), p)
                _accumulate(terms, key, -c * coef)
    return WittElement._raw(params, terms)


def divergence(u: WittElement) -> AlgebraElement:
    """sum_p d_p(u_p)."""
    params = u.params
    terms: Dict = {}
    for (alpha, ivec, p), c in u.terms.items():
        for coef, a, i in partial_monomial(params, p, alpha, ivec):
            _accumulate(terms, (a, i), c * coef)
    return AlgebraElement._raw(params, terms)


def is_in_S(u: WittElement) -> bool:
    """Membership in x^rho * ker(div): the divergence of x^{-rho} u vanishes."""
    rho = u.params.rho
    return not divergence(u.shift(tuple(-r for r in rho)))


def _check_pq(params, p, q):
    for k in (p, q):
        if not 1 <= k <= params.ell:
            raise IndexOutOfRange(f"derivation index {k} outside 1..{params.ell}")


def dpq(p: int, q: int, u: AlgebraElement) -> WittElement:
    """x^rho (d_q(x^{-rho} u) d_p - d_p(x^{-rho} u) d_q)."""
    params = u.params
    _check_pq(params, p, q)
    if p == q:
        return WittElement.zero(params)
    rho = params.rho
    v = u.shift(tuple(-r for r in rho))
    dq = apply_basic_derivation(q, v).shift(rho)
    dp = apply_basic_derivation(p, v).shift(rho)
    terms: Dict = {}
    for (a, i), c in dq.terms.items():
        _accumulate(terms, (a, i, p), c)
    for (a, i), c in dp.terms.items():
        _accumulate(terms, (a, i, q), -c)
    return WittElement._raw(params, terms)


def dpq_expanded(params: AlgebraParams, p: int, q: int, alpha, ivec) -> WittElement:
    """Closed-form expansion of the generator on the monomial x^{alpha, ivec}.

    Coordinates that do not exist (alpha_k for k <= 0, i_k beyond l1+l2) are 0.
    """
    _check_pq(params, p, q)
    alpha, ivec = qq.qvec(alpha), tuple(ivec)
    params.check_monomial(alpha, ivec)
    l1, m = params.l1, params.m

    def shifted(k):
        return alpha[k - l1 - 1] - params.rho[k - l1 - 1] if k > l1 else Fraction(0)

    def expo(k):
        return ivec[k - 1] if k <= m else 0

    def lowered(k):
        return ivec[: k - 1] + (ivec[k - 1] - 1,) + ivec[k:]

    terms: Dict = {}
    _accumulate(terms, (alpha, ivec, p), shifted(q))
    _accumulate(terms, (alpha, ivec, q), -shifted(p))
    if expo(q):
        _accumulate(terms, (alpha, lowered(q), p), Fraction(expo(q)))
    if expo(p):
        _accumulate(terms, (alpha, lowered(p), q), Fraction(-expo(p)))
    return WittElement._raw(params, terms)


def grade_decompose(u: WittElement) -> dict:
    """Split u into its Gamma-homogeneous parts, keyed by degree."""
    parts: Dict[tuple, Dict] = {}
    for (a, i, p), c in u.terms.items():
        parts.setdefault(a, {})[(a, i, p)] = c
    return {a: WittElement._raw(u.params, t) for a, t in sorted(parts.items())}


def span_reduce(elems: Iterable[WittElement]) -> Tuple[List[WittElement], int]:
    """Reduced echelon basis of the Q-span, pivots at the smallest key in the
    global (alpha, ivec, p) order.  The basis is canonical: it depends only on
    the span."""
    elems = list(elems)
    if not elems:
        return [], 0
    params = elems[0].params
    ech = Echelon()
    for e in elems:
        same_params(params, e.params)
        ech.add(e.terms)
    basis = [WittElement._raw(params, row) for row in ech.basis()]
    return basis, len(basis)


def in_span(basis: Sequence[WittElement], u: WittElement) -> bool:
    ech = Echelon()
    for b in basis:
        ech.add(b.terms)
    return ech.contains(u.terms)


def dpq_generators(params: AlgebraParams, alpha, max_level: int) -> List[WittElement]:
    """All closed-form generators on x^{alpha, i}, p < q, |i| <= max_level."""
    from .algebra import exponent_vectors

    out = []
    for ivec in exponent_vectors(params.m, max_level):
        for p, q in itertools.combinations(range(1, params.ell + 1), 2):
            g = dpq_expanded(params, p, q, alpha, ivec)
            if g:
                out.append(g)
    return out
