from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divfree.algebra import (
    AlgebraElement,
    AlgebraParams,
    DerivationVector,
    apply_basic_derivation,
    apply_derivation,
    d_alpha_basis,
    joint_kernel_check,
    multiply,
    pairing,
)
from divfree.errors import IndexOutOfRange, LengthMismatch, NotInGamma, ParamsMismatch
from divfree.expr import parse_algebra
from divfree.sampling import PROFILES, random_algebra_element, random_derivation_vector, rng_for

from conftest import make


def test_multiply_examples():
    P = make(0, 0, 2)
    one = AlgebraElement.one(P)
    u = parse_algebra("3*x[1,-2] + 1/2", P)
    assert one * u == u
    assert parse_algebra("x[1,0]", P) * parse_algebra("x[0,1]", P) == parse_algebra("x[1,1]", P)
    Q = make(0, 1, 1)
    assert parse_algebra("t1*x[2,1]", Q) * parse_algebra("t1*x[-2,-1]", Q) == parse_algebra("t1^2", Q)


def test_multiply_rejects_other_algebra():
    with pytest.raises(ParamsMismatch):
        multiply(AlgebraElement.one(make(0, 0, 2)), AlgebraElement.one(make(0, 0, 3)))


def test_basic_derivation_cases():
    P = make(1, 1, 1)
    assert not apply_basic_derivation(1, AlgebraElement.constant(P, 5))
    Q = make(0, 1, 0)
    u = parse_algebra("t1*x[2]", Q)
    assert apply_basic_derivation(1, u) == parse_algebra("2*t1*x[2] + x[2]", Q)
    R = make(1, 0, 2)
    assert apply_basic_derivation(3, parse_algebra("x[4,-3]", R)) == parse_algebra("-3*x[4,-3]", R)
    with pytest.raises(IndexOutOfRange):
        apply_basic_derivation(4, u.__class__.one(R))


def test_apply_derivation():
    P = make(2, 0, 1)
    u = parse_algebra("t1*t2", P)
    assert not apply_derivation(DerivationVector.zero(3), u)
    assert apply_derivation(DerivationVector((1, 1, 0)), u) == parse_algebra("t2 + t1", P)
    with pytest.raises(ParamsMismatch):
        apply_derivation(DerivationVector((1, 1)), u)


def test_pairing():
    assert pairing(DerivationVector((1, 0, 0)), (4, 7)) == 0
    assert pairing(DerivationVector((0, 1, 0)), (5, 0)) == 5
    assert pairing(DerivationVector((2, 3, 4)), (0, 0)) == 0


def test_d_alpha_cases():
    assert d_alpha_basis(make(0, 0, 3), (0, 0, 0)) == []
    basis = d_alpha_basis(make(1, 0, 2), (0, 0))
    assert [b.support() for b in basis] == [[2], [3]]
    basis = d_alpha_basis(make(0, 0, 3), (1, 0, 0))
    assert [b.coeffs for b in basis] == [(0, 1, 0), (0, 0, 1)]
    with pytest.raises(NotInGamma):
        d_alpha_basis(make(0, 0, 3), (F(1, 2), 0, 0))


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_d_alpha_dimension(prof):
    P = prof.params()
    for alpha in P.gamma.ball(1):
        basis = d_alpha_basis(P, alpha)
        for b in basis:
            assert pairing(b, alpha) == 0
        if P.m >= 1 or any(alpha):
            assert len(basis) >= P.ell - 1 >= 2


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_leibniz_commutation_ring_laws(prof):
    P = prof.params()
    rng = rng_for(0, "algebra", prof.name)
    for _ in range(30):
        u, v, w = (random_algebra_element(P, rng) for _ in range(3))
        d = random_derivation_vector(P.ell, rng)
        assert apply_derivation(d, u * v) == apply_derivation(d, u) * v + u * apply_derivation(d, v)
        p, q = rng.randint(1, P.ell), rng.randint(1, P.ell)
        assert apply_basic_derivation(p, apply_basic_derivation(q, u)) == apply_basic_derivation(
            q, apply_basic_derivation(p, u)
        )
        assert (u * v) * w == u * (v * w)
        assert u * v == v * u
        assert AlgebraElement.one(P) * u == u


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_joint_kernel(prof):
    P = prof.params()
    assert joint_kernel_check(P, 3, P.gamma.ball(1))
    c = AlgebraElement.constant(P, F(7, 3))
    assert all(not apply_basic_derivation(p, c) for p in range(1, P.ell + 1))


def test_params_validation():
    with pytest.raises(NotInGamma):
        AlgebraParams.make(0, 0, 2, rho=(F(1, 2), 0))
    with pytest.raises(LengthMismatch):
        AlgebraParams.make(0, 0, 2, rho=(1,))


@settings(max_examples=50, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 3))
def test_derivation_eigenvalue(a, b, i):
    P = make(0, 1, 1)
    u = AlgebraElement.monomial(P, (a, b), (i,))
    got = apply_basic_derivation(2, u)
    assert got == u.scale(b)
