"""Isomorphism decisions between algebras S(l1, l2, l3; rho, Gamma).

Two algebras of the same shape are isomorphic through a block group element
g with g(Gamma) = Gamma' and, when l1 = 0, g(rho) = rho'.  Witnesses are
searched in coordinates adapted to the subspace Q^{l2} x 0, which every g^{-1}
preserves: in such bases g corresponds to an integer matrix
U = [[U11, 0], [U21, U22]] with unimodular diagonal blocks, and the rho
condition becomes c U = c' for the integer coordinates c, c' of rho, rho'.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Optional

from . import qq
from .algebra import AlgebraParams
from .errors import HypothesisViolated, InvariantMismatch
from .lattice import GroupElement, Lattice, act_lattice, act_vector, hermite_normal_form
from .linalg import solve_affine

ISOMORPHIC = "isomorphic_with_witness"
NOT_ISOMORPHIC = "not_isomorphic"
UNKNOWN = "unknown"

EXIT_CODES = {ISOMORPHIC: 0, NOT_ISOMORPHIC: 1, UNKNOWN: 2}


@dataclass
class IsoVerdict:
    status: str
    witness: Optional[GroupElement] = None
    reason: str = ""
    details: List[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


def invariants_match(params: AlgebraParams, params2: AlgebraParams) -> bool:
    return params.shape == params2.shape


def _require_hypothesis(params: AlgebraParams) -> None:
    if params.ell < 3:
        raise HypothesisViolated(f"the classification needs l >= 3, got l = {params.ell}")


def verify_witness(params: AlgebraParams, params2: AlgebraParams, g: GroupElement) -> bool:
    """g(Gamma) = Gamma' and, for l1 = 0, g(rho) = rho'."""
    _require_hypothesis(params)
    if not invariants_match(params, params2):
        return False
    if (g.l2, g.l3) != (params.l2, params.l3):
        return False
    if params.n == 0:
        return True
    if act_lattice(g, params.gamma) != params2.gamma:
        return False
    if params.l1 == 0 and act_vector(g, params.rho) != params2.rho:
        return False
    return True


def adapted_basis(gamma: Lattice, l2: int) -> tuple:
    """A Z-basis of Gamma whose first l2 rows span Gamma meet Q^{l2} x 0.

    Computed as the Hermite form with the last coordinates pivoted first, so it
    is canonical for the lattice.
    """
    n = gamma.dim
    if n == 0:
        return ()
    perm = list(range(l2, n)) + list(range(l2))
    scale = gamma.scale
    ints = [[int(row[j] * scale) for j in perm] for row in gamma.basis]
    h = hermite_normal_form(ints)
    rows = []
    for r in h:
        back = [Fraction(0)] * n
        for pos, j in enumerate(perm):
            back[j] = Fraction(r[pos], scale)
        rows.append(tuple(back))
    inside = [r for r in rows if not any(r[l2:])]
    outside = [r for r in rows if any(r[l2:])]
    return tuple(inside + outside)


def _coords(basis, v) -> tuple:
    c = qq.row_times(v, qq.inverse(basis))
    assert all(x.denominator == 1 for x in c)
    return tuple(int(x) for x in c)


def _content(v) -> int:
    out = 0
    for x in v:
        out = gcd(out, int(x))
    return out


def obstruction(params: AlgebraParams, params2: AlgebraParams) -> Optional[str]:
    """A checkable reason why no witness exists, or None."""
    if not invariants_match(params, params2):
        return f"shape mismatch: {params.shape} vs {params2.shape}"
    if params.l1 or params.n == 0:
        return None
    rho, rho2 = params.rho, params2.rho
    if any(rho) != any(rho2):
        return "rho-origin: a linear action fixes 0, so exactly one of rho, rho' being 0 is fatal"
    if not any(rho):
        return None
    l2 = params.l2
    c = _coords(adapted_basis(params.gamma, l2), rho)
    c2 = _coords(adapted_basis(params2.gamma, l2), rho2)
    cy, c2y = c[l2:], c2[l2:]
    if any(cy) != any(c2y):
        return "rho lies in the g-stable subspace Q^l2 x 0 on exactly one side"
    if _content(cy) != _content(c2y):
        return f"content of rho modulo Gamma meet Q^l2 x 0 differs: {_content(cy)} vs {_content(c2y)}"
    if _content(c) != _content(c2):
        return f"divisibility of rho in Gamma differs: {_content(c)} vs {_content(c2)}"
    d = _content(cy)
    if l2 == 1 and d and (c2[0] - c[0]) % d and (c2[0] + c[0]) % d:
        return f"rho' first coordinate {c2[0]} is not +-{c[0]} modulo {d}"
    return None


def _candidates(l2: int, l3: int, c, c2, k: int):
    """Integer matrices U of block shape with max-abs exactly k, entries
    solving c U = c2 (when c is given) and unimodular diagonal blocks."""
    n = l2 + l3
    cells = [(i, j) for i in range(n) for j in range(n) if not (i < l2 and j >= l2)]
    index = {cell: pos for pos, cell in enumerate(cells)}
    rows, rhs = [], []
    if c is not None:
        for j in range(n):
            row = [Fraction(0)] * len(cells)
            for i in range(n):
                if (i, j) in index:
                    row[index[(i, j)]] = Fraction(c[i])
            rows.append(row)
            rhs.append(Fraction(c2[j]))
    if not rows:
        rows, rhs = [[Fraction(0)] * len(cells)], [Fraction(0)]
    solved = solve_affine(rows, rhs)
    if solved is None:
        return
    particular, free, pivots = solved
    rng = range(-k, k + 1)
    for values in itertools.product(rng, repeat=len(free)):
        x = list(particular)
        for f, v in zip(free, values):
            x[f] = Fraction(v)
        ok = True
        for p, row in pivots.items():
            val = row.get("rhs", Fraction(0)) - sum(row.get(f, 0) * v for f, v in zip(free, values))
            if val.denominator != 1 or abs(val) > k:
                ok = False
                break
            x[p] = val
        if not ok or max(abs(v) for v in x) != k:
            continue
        u = [[0] * n for _ in range(n)]
        for (i, j), pos in index.items():
            u[i][j] = int(x[pos])
        top = [r[:l2] for r in u[:l2]]
        bottom = [r[l2:] for r in u[l2:]]
        if abs(qq.int_det(top)) == 1 and abs(qq.int_det(bottom)) == 1:
            yield u


def _gcd_columns(v):
    """Unimodular W with v W = (g, 0, ..., 0), g = gcd(v) >= 0."""
    k = len(v)
    w = [[int(i == j) for j in range(k)] for i in range(k)]
    v = list(v)

    def colop(dst, src, f):
        # column dst -= f * column src
        v[dst] -= f * v[src]
        for row in w:
            row[dst] -= f * row[src]

    for j in range(1, k):
        while v[j]:
            colop(0, j, v[0] // v[j])
            v[0], v[j] = v[j], v[0]
            for row in w:
                row[0], row[j] = row[j], row[0]
    if v and v[0] < 0:
        v[0] = -v[0]
        for row in w:
            row[0] = -row[0]
    return w, v


def _embed(n, offset, block):
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, row in enumerate(block):
        for j, x in enumerate(row):
            out[offset + i][offset + j] = x
    return out


def rho_reduced_basis(basis, c, l2: int):
    """Change the adapted basis by a block-unimodular V so that the
    coordinates of rho become (c_x, d, 0, ..., 0) with d = gcd(c_y) and c_x
    reduced modulo d; returns (new basis, new coordinates)."""
    n = len(c)
    l3 = n - l2
    v = qq.identity(n)
    v = [[int(x) for x in r] for r in v]
    cur = list(c)

    def apply(mat):
        nonlocal v, cur
        v = qq.matmul(v, mat)
        cur = [int(x) for x in qq.row_times(cur, mat)]

    if l3:
        w, _ = _gcd_columns(cur[l2:])
        apply(_embed(n, l2, w))
    d = cur[l2] if l3 else 0
    if l2:
        if d:
            # add multiples of d to the x-coordinates through the B-block
            lift = [[int(i == j) for j in range(n)] for i in range(n)]
            for j in range(l2):
                lift[l2][j] = -(cur[j] // d)
            apply(lift)
            if l2 >= 2:
                w, _ = _gcd_columns(cur[:l2])
                apply(_embed(n, 0, w))
                lift = [[int(i == j) for j in range(n)] for i in range(n)]
                lift[l2][1] = 1
                apply(lift)
                w, _ = _gcd_columns(cur[:l2])
                apply(_embed(n, 0, w))
                lift = [[int(i == j) for j in range(n)] for i in range(n)]
                lift[l2][0] = -(cur[0] // d)
                apply(lift)
            elif 2 * cur[0] > d:
                apply(_embed(n, 0, [[-1]]))
                lift = [[int(i == j) for j in range(n)] for i in range(n)]
                lift[l2][0] = -(cur[0] // d)
                apply(lift)
        else:
            w, _ = _gcd_columns(cur[:l2])
            apply(_embed(n, 0, w))
    new_basis = qq.matmul(qq.inverse(v), basis)
    return new_basis, tuple(cur)


def _witness_from(basis, basis2, u, l2, l3) -> GroupElement:
    ginv = qq.matmul(qq.matmul(qq.inverse(basis), u), basis2)
    return GroupElement.from_matrix(l2, l3, qq.inverse(ginv))


def search_witness(params: AlgebraParams, params2: AlgebraParams, bound: int) -> IsoVerdict:
    """Bounded search for g, ordered by the max-abs entry of U and then
    lexicographically; U = identity is tried before anything else."""
    _require_hypothesis(params)
    if bound < 1:
        raise InvariantMismatch("bound must be a positive integer")
    reason = obstruction(params, params2)
    if reason:
        return IsoVerdict(NOT_ISOMORPHIC, reason=reason, details=[reason])
    l2, l3, n = params.l2, params.l3, params.n
    if n == 0:
        g = GroupElement.identity(0, 0)
        return IsoVerdict(ISOMORPHIC, g, details=["no lattice data: the trivial element works"])
    basis = adapted_basis(params.gamma, l2)
    basis2 = adapted_basis(params2.gamma, l2)
    c = c2 = None
    if params.l1 == 0 and any(params.rho):
        c, c2 = _coords(basis, params.rho), _coords(basis2, params2.rho)
        basis, c = rho_reduced_basis(basis, c, l2)
        basis2, c2 = rho_reduced_basis(basis2, c2, l2)
    details = []
    if c == c2:
        g = _witness_from(basis, basis2, qq.identity(n), l2, l3)
        if verify_witness(params, params2, g):
            return IsoVerdict(ISOMORPHIC, g, details=["U = identity in adapted bases"])
    for k in range(1, bound + 1):
        found = sorted((tuple(map(tuple, u)) for u in _candidates(l2, l3, c, c2, k)))
        details.append(f"bound {k}: {len(found)} candidate(s)")
        for u in found:
            g = _witness_from(basis, basis2, u, l2, l3)
            if verify_witness(params, params2, g):
                details.append(f"U = {[list(r) for r in u]}")
                return IsoVerdict(ISOMORPHIC, g, details=details)
    return IsoVerdict(UNKNOWN, reason=f"no witness with coordinates bounded by {bound}", details=details)


@dataclass(frozen=True)
class Descriptor:
    shape: tuple
    gamma_basis: tuple
    rho: Optional[tuple]

    def to_json(self) -> dict:
        out = {
            "shape": list(self.shape),
            "gamma_basis": [[qq.fmt_q(x) for x in row] for row in self.gamma_basis],
        }
        if self.rho is not None:
            out["rho"] = [qq.fmt_q(x) for x in self.rho]
        return out


def structure_descriptor(params: AlgebraParams) -> Descriptor:
    """Shape, canonical Gamma basis and (for l1 = 0) rho.  Equal descriptors
    imply isomorphic algebras; the converse does not hold."""
    return Descriptor(params.shape, params.gamma.basis, params.rho if params.l1 == 0 else None)
