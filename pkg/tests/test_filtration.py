from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divfree.acceptance import _same_span, leading_term_oracle, level0_bruteforce
from divfree.algebra import DerivationVector, d_alpha_basis, exponent_vectors
from divfree.errors import AdmissibilityViolated, LengthMismatch, NotInDAlphaRho, ZeroPart
from divfree.expr import parse_witt
from divfree.filtration import (
    admissible,
    build_with_leading_term,
    compare_degree,
    filtration_member,
    leading_term,
    s_alpha_level0_basis,
)
from divfree.sampling import PROFILES, random_s_element, rng_for
from divfree.witt import WittElement, bracket, dpq_expanded, is_in_S

from conftest import make


def test_compare_examples():
    assert compare_degree((0, 1), (1, 0)) == -1
    assert compare_degree((2, 0), (1, 1)) == 1
    assert compare_degree((0, 0), (1, 0)) == -1
    assert compare_degree((1, 2), (1, 2)) == 0
    with pytest.raises(LengthMismatch):
        compare_degree((1,), (1, 0))


zvec = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=200, deadline=None)
@given(zvec, zvec, zvec)
def test_total_order(i, j, k):
    assert compare_degree(i, j) == -compare_degree(j, i)
    if compare_degree(i, j) <= 0 and compare_degree(j, k) <= 0:
        assert compare_degree(i, k) <= 0
    if compare_degree(i, j) < 0:
        ik = tuple(a + b for a, b in zip(i, k))
        jk = tuple(a + b for a, b in zip(j, k))
        assert compare_degree(ik, jk) < 0


def test_leading_term_examples():
    P = make(1, 1, 1)
    lt = leading_term(parse_witt("x[1,0]*d1", P), (1, 0))
    assert lt.degree == (0, 0) and lt.level == 0 and lt.direction == DerivationVector((1, 0, 0))
    lt = leading_term(parse_witt("t1*x[1,0]*d2 + t2*x[1,0]*d1", P), (1, 0))
    assert lt.degree == (1, 0) and lt.direction == DerivationVector((0, 1, 0))
    with pytest.raises(ZeroPart):
        leading_term(parse_witt("x[1,0]*d1", P), (0, 1))


def test_build_off_rho():
    P = make(0, 0, 2)
    u = build_with_leading_term(P, (1, 0), (), DerivationVector((0, 1)))
    # a normalized D_{2,1} on x^(1,0): leading term exactly x^(1,0) d2
    assert u == dpq_expanded(P, 2, 1, (1, 0), ()).scale(F(1, 1))
    assert u == parse_witt("x[1,0]*d2", P)
    assert is_in_S(u)


def test_build_at_rho_without_t_variables():
    P = make(0, 0, 3, rho=(1, 0, 0))
    with pytest.raises(NotInDAlphaRho):
        build_with_leading_term(P, (1, 0, 0), (), DerivationVector((1, 0, 0)))
    assert s_alpha_level0_basis(P, (1, 0, 0)) == []


def test_build_at_rho_top_direction():
    P = make(2, 0, 1)
    ivec = (0, 0)
    d = DerivationVector((0, 1, 0))
    u = build_with_leading_term(P, (0,), ivec, d)
    assert u == dpq_expanded(P, 2, 1, (0,), (1, 0))
    lt = leading_term(u, (0,))
    assert lt.degree == ivec and lt.direction == d
    with pytest.raises(AdmissibilityViolated):
        build_with_leading_term(P, (0,), (0, 1), d)


def test_level0_examples():
    P = make(0, 0, 3)
    assert len(s_alpha_level0_basis(P, (2, -1, 0))) == 2
    Q = make(1, 0, 2)
    basis = s_alpha_level0_basis(Q, (0, 0))
    assert len(basis) == 2 and all(set(b.terms) <= {((0, 0), (0,), 2), ((0, 0), (0,), 3)} for b in basis)


def test_filtration_member():
    P = make(1, 1, 1)
    assert filtration_member(WittElement.zero(P), (0, 0))
    assert not filtration_member(parse_witt("t1*x[1,0]*d1", P), (0, 1))
    assert filtration_member(parse_witt("t1*x[1,0]*d1", P), (0, 2))
    assert filtration_member(parse_witt("x[1,0]*d1", P), (-1, 2))


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_filtration_compatible_with_brackets(prof):
    P = prof.params()
    rng = rng_for(0, "filtration", prof.name)
    for _ in range(25):
        u, v = random_s_element(P, rng), random_s_element(P, rng)
        if not u or not v:
            continue
        i = max((k[1] for k in u.terms), key=lambda iv: (sum(iv), iv))
        j = max((k[1] for k in v.terms), key=lambda iv: (sum(iv), iv))
        assert filtration_member(u, i) and filtration_member(v, j)
        assert filtration_member(bracket(u, v), tuple(a + b for a, b in zip(i, j)))


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_level0_against_bruteforce(prof):
    P = prof.params()
    for alpha in set(P.gamma.ball(1)) | {P.rho}:
        got = [b.terms for b in s_alpha_level0_basis(P, alpha)]
        assert _same_span(got, level0_bruteforce(P, alpha))


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_build_exactly_on_admissible_inputs(prof):
    P = prof.params()
    alphas = [P.rho] + [a for a in P.gamma.ball(1)][:3]
    directions = [DerivationVector.basic(P.ell, p) for p in range(1, P.ell + 1)]
    for alpha in alphas:
        directions_here = directions + d_alpha_basis(P, tuple(a - r for a, r in zip(alpha, P.rho)))
        for ivec in exponent_vectors(P.m, 1):
            for d in directions_here:
                ok = leading_term_oracle(P, alpha, ivec, d)
                assert admissible(P, alpha, ivec, d) == ok
                if ok:
                    u = build_with_leading_term(P, alpha, ivec, d)
                    lt = leading_term(u, alpha)
                    assert (lt.degree, lt.direction) == (tuple(ivec), d)
                    assert is_in_S(u)
                else:
                    with pytest.raises((NotInDAlphaRho, AdmissibilityViolated)):
                        build_with_leading_term(P, alpha, ivec, d)
