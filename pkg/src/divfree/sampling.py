"""Parameter profiles and seeded random generators for property checks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import qq
from .algebra import AlgebraElement, AlgebraParams, DerivationVector
from .lattice import GroupElement
from .witt import WittElement, dpq_expanded


@dataclass(frozen=True)
class Profile:
    name: str
    shape: tuple
    gamma_gens: Optional[tuple] = None
    rho: Optional[tuple] = None

    def params(self) -> AlgebraParams:
        l1, l2, l3 = self.shape
        return AlgebraParams.make(l1, l2, l3, self.gamma_gens, self.rho)


# Every shape is listed once with rho = 0 and (where Gamma is nonzero) once
# with a nonzero rho; some lattices have fractional generators on purpose.
PROFILES: List[Profile] = [
    Profile("003", (0, 0, 3)),
    Profile("003-rho", (0, 0, 3), ((1, 0, 0), (0, 1, 0), (1, 1, 2)), (1, -1, 0)),
    Profile("012", (0, 1, 2), ((1, 0, 0), (0, Fraction(1, 2), 0), (0, 0, 1))),
    Profile("012-rho", (0, 1, 2), None, (0, 1, -1)),
    Profile("111", (1, 1, 1), ((1, 1), (0, 2))),
    Profile("111-rho", (1, 1, 1), None, (1, 0)),
    Profile("201", (2, 0, 1)),
    Profile("201-rho", (2, 0, 1), ((Fraction(1, 3),),), (Fraction(2, 3),)),
    Profile("102", (1, 0, 2), ((2, 0), (1, 1))),
    Profile("102-rho", (1, 0, 2), None, (0, 1)),
    Profile("021", (0, 2, 1), ((1, 0, 0), (0, 1, 0), (0, 0, Fraction(1, 2)))),
    Profile("021-rho", (0, 2, 1), None, (1, 0, 0)),
    Profile("300", (3, 0, 0)),
]


def profile(name: str) -> Profile:
    for p in PROFILES:
        if p.name == name:
            return p
    raise KeyError(name)


def rng_for(seed: int, *tags) -> random.Random:
    """Independent stream per (seed, tags), stable across runs."""
    return random.Random("|".join(map(str, (seed,) + tags)))


def random_rational(rng: random.Random, size: int = 3) -> Fraction:
    while True:
        c = Fraction(rng.randint(-size, size), rng.choice((1, 1, 1, 2, 3)))
        if c:
            return c


def random_gamma_vector(params: AlgebraParams, rng: random.Random, radius: int = 3) -> tuple:
    coords = [rng.randint(-radius, radius) for _ in range(params.n)]
    return params.gamma.combine(coords)


def random_ivec(m: int, rng: random.Random, max_level: int = 4) -> tuple:
    level = rng.randint(0, max_level)
    iv = [0] * m
    if m:
        for _ in range(level):
            iv[rng.randrange(m)] += 1
    return tuple(iv)


def random_algebra_element(params, rng, nterms=3, radius=2, max_level=2) -> AlgebraElement:
    terms = {}
    for _ in range(nterms):
        key = (random_gamma_vector(params, rng, radius), random_ivec(params.m, rng, max_level))
        terms[key] = terms.get(key, 0) + random_rational(rng)
    return AlgebraElement(params, terms, check=False)


def random_witt_element(params, rng, nterms=3, radius=2, max_level=2) -> WittElement:
    terms = {}
    for _ in range(nterms):
        key = (
            random_gamma_vector(params, rng, radius),
            random_ivec(params.m, rng, max_level),
            rng.randint(1, params.ell),
        )
        terms[key] = terms.get(key, 0) + random_rational(rng)
    return WittElement(params, terms, check=False)


def random_s_element(params, rng, ngens=2, radius=2, max_level=2, alpha=None) -> WittElement:
    """Random combination of divergence-free generators; homogeneous of
    degree ``alpha`` when one is given."""
    out = WittElement.zero(params)
    if params.ell < 2:
        return out
    for _ in range(ngens):
        p, q = sorted(rng.sample(range(1, params.ell + 1), 2))
        a = alpha if alpha is not None else random_gamma_vector(params, rng, radius)
        g = dpq_expanded(params, p, q, a, random_ivec(params.m, rng, max_level))
        out = out + g.scale(random_rational(rng))
    return out


def random_nonzero_s_element(params, rng, **kw) -> WittElement:
    for _ in range(100):
        u = random_s_element(params, rng, **kw)
        if u:
            return u
    raise RuntimeError("could not draw a nonzero element of S")


def random_derivation_vector(ell: int, rng: random.Random, size: int = 3) -> DerivationVector:
    return DerivationVector(tuple(Fraction(rng.randint(-size, size)) for _ in range(ell)))


def random_unimodular(n: int, rng: random.Random, steps: int = 3) -> list:
    """Product of a few elementary integer moves: det is +-1."""
    u = [list(r) for r in qq.identity(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    if n and rng.random() < 0.3:
        k = rng.randrange(n)
        u[k] = [-x for x in u[k]]
    return u


def random_group_element(l2: int, l3: int, rng: random.Random, size: int = 2) -> GroupElement:
    """Random element of the block group with small rational entries."""

    def block(rows, cols, invertible):
        while True:
            mat = [[Fraction(rng.randint(-size, size), rng.choice((1, 1, 2))) for _ in range(cols)] for _ in range(rows)]
            if not invertible or qq.det(mat) != 0:
                return mat

    return GroupElement(l2, l3, block(l2, l2, True), block(l3, l2, False), block(l3, l3, True))


def small_monomials(params: AlgebraParams, radius: int = 1, max_level: int = 1):
    """All (alpha, ivec) with alpha in the basis ball and |ivec| <= max_level."""
    from .algebra import exponent_vectors

    return list(itertools.product(params.gamma.ball(radius), exponent_vectors(params.m, max_level)))
