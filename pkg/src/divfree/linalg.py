"""Exact sparse linear algebra over Q.

Vectors are dicts mapping a hashable coordinate key to a nonzero Fraction.
Every routine takes a ``order`` callable turning a key into a sort key; the
pivot of a row is its smallest coordinate under that order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Optional

SparseVec = Dict[Hashable, Fraction]


def _identity_order(key):
    return key


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Rows are kept fully reduced with unit pivots, so the final basis depends
    only on the span and the coordinate order, never on insertion order.
    """

    def __init__(self, order: Callable = _identity_order):
        self.order = order
        self.rows: Dict[Hashable, SparseVec] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: SparseVec) -> SparseVec:
        """Return ``vec`` reduced against the current pivots (a copy)."""
        v = {k: Fraction(c) for k, c in vec.items() if c}
        for key in [k for k in v if k in self.rows]:
            c = v.get(key)
            if not c:
                continue
            for k2, c2 in self.rows[key].items():
                nv = v.get(k2, 0) - c * c2
                if nv:
                    v[k2] = nv
                else:
                    v.pop(k2, None)
        return v

    def add(self, vec: SparseVec) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        pivot = min(v, key=self.order)
        inv = 1 / v[pivot]
        v = {k: c * inv for k, c in v.items()}
        for other in self.rows.values():
            c = other.get(pivot)
            if c:
                for k2, c2 in v.items():
                    nv = other.get(k2, 0) - c * c2
                    if nv:
                        other[k2] = nv
                    else:
                        other.pop(k2, None)
        self.rows[pivot] = v
        return True

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)

    def basis(self) -> List[SparseVec]:
        """Rows sorted by pivot position."""
        return [dict(self.rows[p]) for p in sorted(self.rows, key=self.order)]


def rref(vectors: Iterable[SparseVec], order: Callable = _identity_order) -> List[SparseVec]:
    ech = Echelon(order)
    for v in vectors:
        ech.add(v)
    return ech.basis()


def rank(vectors: Iterable[SparseVec]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def subspace_within(
    vectors: Iterable[SparseVec],
    allowed: Callable[[Hashable], bool],
    order: Callable = _identity_order,
) -> List[SparseVec]:
    """Basis of the intersection of span(vectors) with the coordinate subspace
    spanned by the ``allowed`` keys.

    Disallowed coordinates are eliminated first; a reduced row whose pivot is
    allowed then has all its entries allowed.
    """
    ech = Echelon(lambda k: (bool(allowed(k)), order(k)))
    for v in vectors:
        ech.add(v)
    return [row for row in ech.basis() if allowed(min(row, key=ech.order))]


def kernel(images: List[SparseVec]) -> List[Dict[int, Fraction]]:
    """Basis of {c : sum_i c_i images[i] = 0}, as dicts index -> coefficient."""
    tagged = []
    for i, img in enumerate(images):
        row = {("img", k): c for k, c in img.items() if c}
        row[("tag", i)] = Fraction(1)
        tagged.append(row)
    out = subspace_within(tagged, lambda k: k[0] == "tag", order=lambda k: (k[0], repr(k[1])) if k[0] == "img" else k)
    return [{k[1]: c for k, c in row.items()} for row in out]


def dense_kernel(matrix: List[List[Fraction]]) -> List[List[Fraction]]:
    """Null space of a dense matrix (columns are unknowns), RREF free-column basis."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    ech = Echelon()
    for row in matrix:
        ech.add({j: c for j, c in enumerate(row) if c})
    pivots = set(ech.rows)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for p, row in ech.rows.items():
            v[p] = -row.get(free, Fraction(0))
        basis.append(v)
    return basis


def solve_affine(matrix: List[List[Fraction]], rhs: List[Fraction]) -> Optional[tuple]:
    """Parametrize the solutions of ``matrix @ x = rhs``.

    Returns ``(particular, free_columns, pivot_rows)`` where ``pivot_rows``
    maps a pivot column to its reduced row (dict incl. the key ``"rhs"``), or
    None when the system is inconsistent.
    """
    ncols = len(matrix[0]) if matrix else 0
    ech = Echelon(lambda k: (1, 0) if k == "rhs" else (0, k))
    for row, b in zip(matrix, rhs):
        vec = {j: Fraction(c) for j, c in enumerate(row) if c}
        if b:
            vec["rhs"] = Fraction(b)
        ech.add(vec)
    if "rhs" in ech.rows:
        return None
    free = [j for j in range(ncols) if j not in ech.rows]
    particular = [Fraction(0)] * ncols
    for p, row in ech.rows.items():
        particular[p] = row.get("rhs", Fraction(0))
    return particular, free, dict(ech.rows)
