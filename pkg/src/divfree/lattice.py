"""Finitely generated nondegenerate subgroups of Q^n and the block
lower-triangular group acting on them.

A subgroup is stored by the Hermite normal form of its integer rescaling, so
two generator lists produce equal :class:`Lattice` objects exactly when they
generate the same subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import qq
from .errors import DegenerateLattice, DivFreeError, LengthMismatch


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF of an integer matrix, zero rows dropped.

    Pivots are positive and move strictly right going down; entries above a
    pivot lie in ``[0, pivot)``.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    prow = 0
    for col in range(ncols):
        if prow >= len(a):
            break
        # gcd-combine everything at or below prow into a single pivot
        while True:
            nz = [r for r in range(prow, len(a)) if a[r][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(a[r][col]))
            a[prow], a[best] = a[best], a[prow]
            done = True
            for r in range(prow + 1, len(a)):
                if a[r][col]:
                    f = a[r][col] // a[prow][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[prow])]
                    if a[r][col]:
                        done = False
            if done:
                break
        if a[prow][col] == 0:
            continue
        if a[prow][col] < 0:
            a[prow] = [-x for x in a[prow]]
        p = a[prow][col]
        for r in range(prow):
            f = a[r][col] // p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[prow])]
        prow += 1
    return [r for r in a if any(r)]


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate finitely generated subgroup of Q^dim.

    ``basis`` is the canonical Z-basis (exactly ``dim`` rows, upper triangular
    with positive diagonal); ``scale`` is the least common denominator of its
    entries.
    """

    dim: int
    basis: tuple
    scale: int = 1

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return canonicalize(qq.identity(n), dim=n)

    @classmethod
    def trivial(cls) -> "Lattice":
        return cls(0, (), 1)

    def coordinates(self, alpha: Sequence) -> Optional[tuple]:
        """Integer coordinates of ``alpha`` in the canonical basis, or None."""
        if len(alpha) != self.dim:
            raise LengthMismatch(f"vector of length {len(alpha)} in a lattice of dimension {self.dim}")
        rest = [Fraction(a) for a in alpha]
        coords = []
        for i, row in enumerate(self.basis):
            c = rest[i] / row[i]
            if c.denominator != 1:
                return None
            coords.append(int(c))
            if c:
                rest = [x - c * y for x, y in zip(rest, row)]
        return tuple(coords)

    def __contains__(self, alpha) -> bool:
        return self.coordinates(alpha) is not None

    def combine(self, coords: Sequence[int]) -> tuple:
        """The lattice vector with the given integer coordinates."""
        out = qq.zeros(self.dim)
        for c, row in zip(coords, self.basis):
            if c:
                out = qq.vadd(out, qq.vscale(c, row))
        return out

    def ball(self, radius: int) -> list:
        """All vectors whose basis coordinates lie in [-radius, radius]."""
        rng = range(-radius, radius + 1)
        return [self.combine(c) for c in itertools.product(rng, repeat=self.dim)]


def canonicalize(generators: Iterable[Sequence], dim: Optional[int] = None) -> Lattice:
    """Canonical lattice generated by ``generators``."""
    gens = [qq.qvec(g) for g in generators]
    if dim is None:
        if not gens:
            raise DegenerateLattice("no generators and no dimension given")
        dim = len(gens[0])
    if any(len(g) != dim for g in gens):
        raise LengthMismatch("generators have inconsistent lengths")
    if dim == 0:
        return Lattice.trivial()
    d = qq.common_denominator(x for g in gens for x in g)
    ints = [[int(x * d) for x in g] for g in gens]
    h = hermite_normal_form(ints)
    if len(h) < dim:
        raise DegenerateLattice(f"generators span a rank-{len(h)} subspace of Q^{dim}")
    basis = tuple(tuple(Fraction(x, d) for x in row) for row in h)
    scale = qq.common_denominator(x for row in basis for x in row)
    return Lattice(dim, basis, scale)


def contains(gamma: Lattice, alpha: Sequence) -> bool:
    return gamma.coordinates(qq.qvec(alpha)) is not None


@dataclass(frozen=True)
class GroupElement:
    """An element [[A, 0], [B, C]] of the block lower-triangular group.

    A is l2 x l2, B is l3 x l2 (lower-left block), C is l3 x l3; A and C are
    invertible.
    """

    l2: int
    l3: int
    A: tuple
    B: tuple
    C: tuple

    def __post_init__(self):
        l2, l3 = self.l2, self.l3
        object.__setattr__(self, "A", qq.qmat(self.A))
        object.__setattr__(self, "B", qq.qmat(self.B) if l2 else tuple(() for _ in range(l3)))
        object.__setattr__(self, "C", qq.qmat(self.C))
        shapes = (
            len(self.A) == l2 and all(len(r) == l2 for r in self.A),
            len(self.B) == l3 and all(len(r) == l2 for r in self.B),
            len(self.C) == l3 and all(len(r) == l3 for r in self.C),
        )
        if not all(shapes):
            raise DivFreeError(f"block shapes do not match l2={l2}, l3={l3}")
        if qq.det(self.A) == 0 or qq.det(self.C) == 0:
            raise DivFreeError("diagonal blocks must be invertible")

    @property
    def n(self) -> int:
        return self.l2 + self.l3

    @classmethod
    def identity(cls, l2: int, l3: int) -> "GroupElement":
        return cls(l2, l3, qq.identity(l2), [[0] * l2 for _ in range(l3)], qq.identity(l3))

    @classmethod
    def from_matrix(cls, l2: int, l3: int, m: Sequence[Sequence]) -> "GroupElement":
        m = qq.qmat(m)
        if any(m[i][j] != 0 for i in range(l2) for j in range(l2, l2 + l3)):
            raise DivFreeError("upper-right block must vanish")
        A = [row[:l2] for row in m[:l2]]
        B = [row[:l2] for row in m[l2:]]
        C = [row[l2:] for row in m[l2:]]
        return cls(l2, l3, A, B, C)

    def matrix(self) -> tuple:
        top = [tuple(self.A[i]) + qq.zeros(self.l3) for i in range(self.l2)]
        bottom = [tuple(self.B[i]) + tuple(self.C[i]) for i in range(self.l3)]
        return tuple(top + bottom)

    def inverse(self) -> "GroupElement":
        return GroupElement.from_matrix(self.l2, self.l3, qq.inverse(self.matrix()))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if (self.l2, self.l3) != (other.l2, other.l3):
            raise DivFreeError("group elements of different shapes")
        return GroupElement.from_matrix(self.l2, self.l3, qq.matmul(self.matrix(), other.matrix()))


def act_vector(g: GroupElement, alpha: Sequence) -> tuple:
    """The action alpha -> alpha g^{-1} on row vectors."""
    alpha = qq.qvec(alpha)
    if len(alpha) != g.n:
        raise LengthMismatch("vector length does not match the group element")
    return qq.row_times(alpha, qq.inverse(g.matrix()))


def act_lattice(g: GroupElement, gamma: Lattice) -> Lattice:
    if gamma.dim != g.n:
        raise LengthMismatch("lattice dimension does not match the group element")
    if gamma.dim == 0:
        return gamma
    ginv = qq.inverse(g.matrix())
    return canonicalize([qq.row_times(b, ginv) for b in gamma.basis], dim=gamma.dim)
