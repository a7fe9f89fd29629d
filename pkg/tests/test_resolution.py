import random

import pytest
from hypothesis import given, strategies as st

from boundquiver.errors import NonExactSequence
from boundquiver.fixtures import fixture, fixture_over
from boundquiver.modules import ModuleHom, projective, simple
from boundquiver.random_corpus import corpus, random_endomorphism, random_module, random_ses
from boundquiver.resolution import (
    check_lift,
    e_bounded_horizon,
    ext1_dims,
    ext_self_dims,
    horseshoe,
    injective_dimension_simple,
    lift_endomorphism,
    minimal_resolution,
    pad_resolution,
    periodicity_certificate,
    simple_resolution,
)

from fixture_data import NAMES, oracle, oracle_for

CORPUS = [e.algebra for e in corpus(25, seed=3000, max_dim=30)]
SMALL = [fixture(n) for n in NAMES] + CORPUS[:8]
seeds = st.integers(0, 2**32)


def euler_dims(A, res):
    """Alternating sum of the dimension vectors of the terms."""
    out = {w: 0 for w in A.vertices}
    for i, t in enumerate(res.terms):
        for v in t:
            for w in A.vertices:
                out[w] += (-1) ** i * len(A.peirce(v, w))
    return out


# -- frozen fixture values -----------------------------------------------------------


def test_fx3_projective_and_injective_dimensions():
    A = fixture("FX3")
    pds = [simple_resolution(A, v, 10).projective_dimension for v in A.vertices]
    ids = [injective_dimension_simple(A, v, 10) for v in A.vertices]
    assert pds == [4, 3, 2, 3]
    assert ids == [3, 4, 2, 1]
    res = simple_resolution(A, "4", 10)
    assert [tuple(t) for t in res.terms] == [("4",), ("3",), ("1",), ("2",)]


def test_fx1_fx5_are_hereditary():
    for name in ("FX1", "FX5"):
        A = fixture(name)
        assert max(simple_resolution(A, v, 5).projective_dimension for v in A.vertices) == 1


def test_fx2_self_extensions():
    A = fixture("FX2")
    assert ext_self_dims(A, "1", 10) == [1] * 10
    i, j, iso = periodicity_certificate(A, "1", 6)
    assert (i, j) == (0, 1) and iso.is_iso()


def test_fx4_periodicity():
    A = fixture("FX4")
    res = simple_resolution(A, "1", 8)
    assert not res.terminated
    assert res.syzygy_module(2).dim_vector() == simple(A, "2").dim_vector()
    i, j, _ = periodicity_certificate(A, "1", 8)
    assert (i, j) == (0, 4)


# -- exactness and minimality --------------------------------------------------------


@pytest.mark.parametrize("A", SMALL, ids=repr)
def test_simple_resolutions_are_minimal_and_exact(A):
    for v in A.vertices:
        res = simple_resolution(A, v, 6, max_dim=60)
        assert res.is_minimal()
        assert res.verify_exact()
        if res.terminated:
            assert euler_dims(A, res) == simple(A, v).dims


@given(seeds)
def test_module_resolutions(seed):
    rng = random.Random(seed)
    A = SMALL[seed % len(SMALL)]
    M = random_module(rng, A)
    res = minimal_resolution(M, 5, max_dim=60)
    assert res.is_minimal() and res.verify_exact()
    if res.terminated:
        assert euler_dims(A, res) == M.dims


def test_projectives_resolve_in_one_step():
    A = fixture("FX3")
    for v in A.vertices:
        res = minimal_resolution(projective(A, [v]), 5)
        assert res.terminated and res.projective_dimension == 0


# -- Ext against the oracle ------------------------------------------------------------


@pytest.mark.parametrize("A", [fixture(n) for n in NAMES] + CORPUS, ids=repr)
def test_ext1_counts_arrows_and_ext2_counts_minimal_relations(A):
    o = oracle_for(A)
    arrows = o.arrow_counts()
    ext1 = ext1_dims(A)
    assert ext1 == {(i, j): arrows.get((i, j), 0) for i in A.vertices for j in A.vertices}
    rels = o.minimal_relation_counts()
    for i in A.vertices:
        res = simple_resolution(A, i, 2)
        for j in A.vertices:
            assert res.top_multiplicity(2, j) == rels.get((i, j), 0)


def test_fixture_ext2_frozen():
    A = fixture("FX3")
    got = {(i, j): simple_resolution(A, i, 2).top_multiplicity(2, j)
           for i in A.vertices for j in A.vertices}
    assert {k for k, m in got.items() if m} == set(oracle("FX3").minimal_relation_counts())


@pytest.mark.parametrize("A", [fixture(n) for n in NAMES] + CORPUS[:12], ids=repr)
def test_duality_of_projective_and_injective_dimension(A):
    Op = A.opposite()
    for v in A.vertices:
        pd = simple_resolution(A, v, 8, max_dim=60).projective_dimension
        assert injective_dimension_simple(Op, v, 8, max_dim=60) == pd


# -- lifts, padding, horseshoe -----------------------------------------------------------


@given(seeds)
def test_lifts_commute_with_differentials(seed):
    rng = random.Random(seed)
    A = SMALL[seed % len(SMALL)]
    M = random_module(rng, A)
    phi = random_endomorphism(rng, M)
    res = minimal_resolution(M, 4, max_dim=60)
    assert check_lift(phi, res, lift_endomorphism(phi, res))
    assert check_lift(phi, res, lift_endomorphism(phi, res, rng=rng))


def test_bad_lift_is_detected():
    A = fixture("FX3")
    M = simple(A, "4")
    res = minimal_resolution(M, 4)
    lifts = lift_endomorphism(ModuleHom.identity(M), res)
    assert not check_lift(ModuleHom.identity(M).scale(2), res, lifts)


@given(seeds)
def test_padding_keeps_exactness(seed):
    rng = random.Random(seed)
    A = SMALL[seed % len(SMALL)]
    M = random_module(rng, A)
    res = minimal_resolution(M, 4, max_dim=60)
    top = len(res.terms) if res.terminated else len(res.terms) - 1
    if top <= 0:
        return
    pos = rng.randrange(top)
    padded = pad_resolution(res, pos, [rng.choice(A.vertices)])
    assert padded.verify_exact()
    assert not padded.is_minimal()
    phi = random_endomorphism(rng, M)
    assert check_lift(phi, padded, lift_endomorphism(phi, padded))


@given(seeds)
def test_horseshoe_resolves_the_middle_term(seed):
    rng = random.Random(seed)
    A = SMALL[seed % len(SMALL)]
    ses = random_ses(rng, A)
    res_L = minimal_resolution(ses.u.source, 4, max_dim=60)
    res_N = minimal_resolution(ses.v.target, 4, max_dim=60)
    res_M, q, p = horseshoe(ses.u, ses.v, res_L, res_N)
    assert res_M.module is ses.u.target
    assert res_M.verify_exact()
    for i, t in enumerate(res_M.terms):
        assert q[i].source + p[i].target == t
        assert (p[i] @ q[i]).entries == [[A.zero()] * len(q[i].source) for _ in p[i].target]


def test_padding_the_truncated_top_is_rejected():
    A = fixture("FX4")
    res = simple_resolution(A, "1", 3)
    with pytest.raises(ValueError):
        pad_resolution(res, len(res.terms) - 1, ["1"])
    assert pad_resolution(res, len(res.terms) - 2, ["1"]).verify_exact()


def test_horseshoe_rejects_non_exact_input():
    A = fixture("FX3")
    S = simple(A, "1")
    z = ModuleHom.zero(S, S)
    res = minimal_resolution(S, 4)
    with pytest.raises(NonExactSequence):
        horseshoe(z, z, res, res)


# -- horizons --------------------------------------------------------------------------


def test_e_bounded_horizon_certificates():
    A = fixture("FX3")
    e = {"1", "2", "3"}
    res = simple_resolution(A, "4", 10)
    assert e_bounded_horizon(res, e) == 4
    assert e_bounded_horizon(res, {"4"}) == 1
    B = fixture("FX4")
    trunc = simple_resolution(B, "1", 5)
    assert e_bounded_horizon(trunc, {"1"}) is None
    assert e_bounded_horizon(trunc, {"1", "2"}, periodicity=(0, 4)) is None
    padded = pad_resolution(trunc, 1, ["2"])
    assert e_bounded_horizon(padded, set(), injective_dim=0) is None


def test_fx2_over_other_fields():
    for p in (2, 3):
        A = fixture_over("FX2", p)
        assert ext_self_dims(A, "1", 4) == [1] * 4
