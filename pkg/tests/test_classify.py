from fractions import Fraction as F

import pytest

from divfree.classify import (
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    UNKNOWN,
    adapted_basis,
    invariants_match,
    obstruction,
    search_witness,
    structure_descriptor,
    verify_witness,
)
from divfree.errors import HypothesisViolated
from divfree.lattice import GroupElement, act_lattice, act_vector
from divfree.morphisms import group_induced_map
from divfree.sampling import PROFILES, random_group_element, rng_for

from conftest import make


def test_invariants_match_examples():
    P = make(0, 1, 2)
    assert invariants_match(P, P)
    assert not invariants_match(make(1, 0, 2), make(0, 1, 2))
    assert invariants_match(make(2, 1, 0), make(2, 1, 0, gens=[(2,)]))


def test_verify_witness_examples():
    P = make(0, 0, 3)
    assert verify_witness(P, P, GroupElement.identity(0, 3))
    Q = make(0, 0, 3, rho=(1, 0, 0))
    rng = rng_for(0, "origin")
    for _ in range(5):
        assert not verify_witness(P, Q, random_group_element(0, 3, rng))
    R = make(0, 1, 2)
    for _ in range(10):
        g0 = random_group_element(1, 2, rng)
        R2 = make(0, 1, 2, gens=act_lattice(g0, R.gamma).basis)
        assert verify_witness(R, R2, g0)


def test_hypothesis_enforced():
    P = make(0, 0, 2)
    with pytest.raises(HypothesisViolated):
        verify_witness(P, P, GroupElement.identity(0, 2))
    with pytest.raises(HypothesisViolated):
        search_witness(P, P, 1)


def test_search_identity_at_bound_one():
    for prof in PROFILES:
        P = prof.params()
        v = search_witness(P, P, 1)
        assert v.status == ISOMORPHIC and v.exit_code == 0
        assert verify_witness(P, P, v.witness)


def test_search_origin_obstruction():
    P, Q = make(0, 0, 3), make(0, 0, 3, rho=(1, 0, 0))
    for bound in (1, 2, 4):
        v = search_witness(P, Q, bound)
        assert v.status == NOT_ISOMORPHIC and v.exit_code == 1
        assert "origin" in v.reason


def test_search_half_scaling():
    P = make(0, 0, 3)
    Q = make(0, 0, 3, gens=[(2, 0, 0), (0, 1, 0), (0, 0, 1)])
    v = search_witness(P, Q, 2)
    assert v.status == ISOMORPHIC
    assert act_lattice(v.witness, P.gamma) == Q.gamma
    assert verify_witness(P, Q, v.witness)


def test_shape_mismatch():
    v = search_witness(make(1, 0, 2), make(0, 1, 2), 3)
    assert v.status == NOT_ISOMORPHIC and "shape" in v.reason


def test_l2_congruence_obstruction():
    # rho coordinates (1, 5) and (2, 5): 2 is not +-1 modulo 5
    P = make(0, 1, 2, rho=(1, 5, 0))
    Q = make(0, 1, 2, rho=(2, 5, 0))
    assert obstruction(P, Q) is not None
    assert search_witness(P, Q, 2).status == NOT_ISOMORPHIC
    R = make(0, 1, 2, rho=(4, 5, 0))
    assert obstruction(P, R) is None
    assert search_witness(P, R, 2).status == ISOMORPHIC


def test_rho_in_invariant_subspace_on_one_side():
    P = make(0, 1, 2, rho=(1, 0, 0))
    Q = make(0, 1, 2, rho=(0, 1, 0))
    assert search_witness(P, Q, 3).status == NOT_ISOMORPHIC


def test_adapted_basis_puts_invariant_part_first():
    P = make(0, 1, 1, gens=[(1, 1), (0, 2)])
    b = adapted_basis(P.gamma, 1)
    assert b[0][1] == 0 and b[1][1] != 0
    assert make(0, 1, 1, gens=b).gamma == P.gamma


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_round_trip_symmetry_and_soundness(prof):
    P = prof.params()
    if P.ell < 3:
        pytest.skip("classification needs l >= 3")
    rng = rng_for(0, "classify", prof.name)
    for _ in range(4):
        g0 = random_group_element(P.l2, P.l3, rng, 2)
        P2 = make(*P.shape, gens=act_lattice(g0, P.gamma).basis, rho=act_vector(g0, P.rho) if P.l1 == 0 else None)
        v = search_witness(P, P2, 3)
        assert v.status == ISOMORPHIC
        assert verify_witness(P, P2, v.witness)
        assert verify_witness(P2, P, v.witness.inverse())
        back = search_witness(P2, P, 3)
        assert back.status == ISOMORPHIC
        group_induced_map(P, P2, v.witness, rng=rng, samples=2)


@pytest.mark.parametrize("shape", [(0, 0, 3), (0, 1, 2), (0, 2, 1), (0, 1, 3)])
def test_random_pairs_are_decided(shape):
    rng = rng_for(0, "decided", shape)
    n = shape[1] + shape[2]
    for _ in range(15):
        pair = []
        for _ in range(2):
            gens = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                gens[i][i] += 3
            rho = [rng.randint(-2, 2) for _ in range(n)]
            P = make(*shape, gens=gens)
            pair.append(P.with_rho(P.gamma.combine(rho)))
        v = search_witness(pair[0], pair[1], 2)
        assert v.status != UNKNOWN
        assert (v.status == NOT_ISOMORPHIC) == (obstruction(*pair) is not None)
        if v.status == ISOMORPHIC:
            assert verify_witness(pair[0], pair[1], v.witness)


def test_descriptor():
    P = make(1, 0, 2, rho=(1, 0))
    assert structure_descriptor(P).rho is None
    assert "rho" not in structure_descriptor(P).to_json()
    Q = make(0, 0, 3, rho=(1, 0, 0))
    assert structure_descriptor(Q).rho == (1, 0, 0)
    assert structure_descriptor(Q) == structure_descriptor(make(0, 0, 3, rho=(1, 0, 0)))
    g = GroupElement(0, 3, [], [], [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    Q2 = make(0, 0, 3, rho=act_vector(g, Q.rho))
    assert structure_descriptor(Q2) != structure_descriptor(Q)
    assert verify_witness(Q, Q2, g)
