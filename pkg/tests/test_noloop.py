import random
from dataclasses import replace
from itertools import combinations

import pytest

from boundquiver.fixtures import fixture
from boundquiver.linalg import GF
from boundquiver.noloop import (
    AnalysisOptions,
    DimensionStatus,
    analyze,
    consistency_audit,
    cycle_certificate,
    enumerate_cycles,
    extension_quiver,
    is_cyclically_free,
    is_cyclically_nonzero,
    is_minimal_relation_summand,
    local_commutativity,
)
from boundquiver.quiver import cyclic_permutations, is_primitive, paths_from
from boundquiver.random_corpus import corpus, random_algebra

from fixture_data import oracle_for

OPTS = AnalysisOptions(depth=8, cycles=4, max_dim=60)


@pytest.fixture(scope="module")
def reports():
    out = {}
    for name in ("FX1", "FX2", "FX3", "FX4", "FX5"):
        lam = [["1", "2", "3"]] if name == "FX3" else []
        out[name] = analyze(fixture(name), replace(OPTS, lambda_e=lam))
    return out


# -- cycles and minimal relations -----------------------------------------------------------


def test_fx4_cycle_is_free_and_nonzero():
    A = fixture("FX4")
    c = A.quiver.path(["alpha", "beta"])
    assert is_cyclically_nonzero(A, c) and is_cyclically_free(A, c)
    cert = cycle_certificate(A, c)
    assert cert.support == frozenset({"1", "2"})
    assert [str(p) for p in cert.permutations] == ["alpha*beta", "beta*alpha"]
    assert cert.hh0_witness is True


def test_fx3_cycles_are_not_free():
    A = fixture("FX3")
    assert [str(c) for c in enumerate_cycles(A, 3)] == ["alpha*beta*epsilon", "delta*epsilon*gamma"]
    cycles = enumerate_cycles(A, 6)
    assert len(cycles) == 3
    for c in cycles:
        assert not is_cyclically_free(A, c) and not is_cyclically_nonzero(A, c)


def test_enumerated_cycles_are_primitive_and_distinct():
    A = fixture("FX4")
    cycles = enumerate_cycles(A, 6)
    assert [str(c) for c in cycles] == ["alpha*beta"]
    for entry in corpus(10, seed=5000):
        q = entry.algebra.quiver
        cs = enumerate_cycles(entry.algebra, 4)
        assert all(is_primitive(q, c) for c in cs)
        assert len({frozenset(map(str, [c])) for c in cs}) == len(cs)
    with pytest.raises(ValueError):
        enumerate_cycles(A, 0)


@pytest.mark.parametrize("entry", [e for e in corpus(60, seed=6000) if e.monomial][:20],
                         ids=lambda e: f"seed{e.seed}")
def test_monomial_free_iff_nonzero(entry):
    A = entry.algebra
    for c in enumerate_cycles(A, 4):
        assert is_cyclically_free(A, c) == is_cyclically_nonzero(A, c)


def _brute_summands(A, o):
    """Paths lying in the support of a support-minimal element of I (over F_2)."""
    rows = o.ideal_rows()
    base = o.rank(rows)

    def in_ideal(paths):
        return o.rank(rows + [{(p.source, p.target, p.arrows): 1 for p in paths}]) == base

    n = A.nilpotency_degree
    out = set()
    for a in A.vertices:
        for b in A.vertices:
            block = [p for p in paths_from(A.quiver, a, n - 1) if p.target == b and p.length >= 2]
            members = [frozenset(s) for k in range(1, len(block) + 1)
                       for s in combinations(block, k) if in_ideal(s)]
            mset = set(members)
            for s in members:
                if not any(t < s for t in mset):
                    out |= s
    return out


def _tiny_f2_algebras(count):
    out = []
    rng = random.Random(77)
    while len(out) < count:
        A = random_algebra(rng, field=GF(2), monomial=False, max_vertices=3, max_arrows=4)
        n = A.nilpotency_degree
        blocks = [len([p for p in paths_from(A.quiver, a, n - 1) if p.target == b and p.length >= 2])
                  for a in A.vertices for b in A.vertices]
        if A.relations and max(blocks) <= 8:
            out.append(A)
    return out


@pytest.mark.parametrize("A", _tiny_f2_algebras(12), ids=repr)
def test_minimal_relation_summands_by_enumeration(A):
    o = oracle_for(A)
    expected = _brute_summands(A, o)
    n = A.nilpotency_degree
    for v in A.vertices:
        for p in paths_from(A.quiver, v, n - 1):
            if p.length >= 2:
                assert is_minimal_relation_summand(A, p) == (p in expected)
    assert not is_minimal_relation_summand(A, A.quiver.trivial(A.vertices[0]))


def test_cycle_status_is_invariant_under_rotation():
    for entry in corpus(20, seed=7000):
        A = entry.algebra
        q = A.quiver
        for c in enumerate_cycles(A, 3):
            for r in cyclic_permutations(q, c):
                assert is_cyclically_free(A, r) == is_cyclically_free(A, c)
                assert is_cyclically_nonzero(A, r) == is_cyclically_nonzero(A, c)


def test_cycle_powers_reduce_to_the_root():
    A = fixture("FX4")
    c = A.quiver.path(["alpha", "beta"])
    c2 = A.quiver.path(["alpha", "beta", "alpha", "beta"])
    # alpha*beta*alpha lies in I, so the square is not free while its root is
    assert is_cyclically_free(A, c) and not is_cyclically_free(A, c2)


# -- analysis ----------------------------------------------------------------------------------


def test_fx2_report(reports):
    r = reports["FX2"]
    assert [c.vertex for c in r.loop_certificates] == ["1"]
    v = r.vertices["1"]
    assert v.ext1_self == 1
    assert v.pd.kind == v.id.kind == "infinite"
    assert v.pd_periodicity == (0, 1)
    assert r.gldim.kind == "infinite"
    assert not r.radical_trivial
    assert len(r.cycle_certificates) == 1
    cert = r.cycle_certificates[0]
    assert str(cert.cycle) == "alpha" and cert.cyclically_free


def test_fx3_report(reports):
    r = reports["FX3"]
    assert r.gldim == DimensionStatus.finite(4)
    assert [r.vertices[v].pd.value for v in "1234"] == [4, 3, 2, 3]
    assert [r.vertices[v].id.value for v in "1234"] == [3, 4, 2, 1]
    (qs,) = r.quotients
    assert (qs.dim, qs.hh0_dim, qs.radical_trivial, qs.radical_square_zero) == (6, 3, True, True)
    assert qs.injective_dim_Se == 4
    assert qs.gldim.kind == "infinite"
    assert set(qs.periodicity.values()) == {(0, 3)}


def test_fx4_report(reports):
    r = reports["FX4"]
    assert r.gldim.kind == "infinite"
    assert r.vertices["1"].pd_periodicity == (0, 4)
    assert r.cycle_certificates[0].cyclically_free


def test_hereditary_reports(reports):
    for name in ("FX1", "FX5"):
        assert reports[name].gldim == DimensionStatus.finite(1)
    assert extension_quiver(fixture("FX5")) == [("1", "2", 2)]
    assert reports["FX5"].extension_quiver == [("1", "2", 2)]


def test_local_commutativity():
    assert local_commutativity(fixture("FX2"), "1")
    assert local_commutativity(fixture("FX3"), "1")


def test_fixture_reports_pass_the_audit(reports):
    for name, r in reports.items():
        assert consistency_audit(r) == [], name


def test_forged_report_is_caught(reports):
    r = reports["FX2"]
    forged = replace(r, vertices={"1": replace(r.vertices["1"], pd=DimensionStatus.finite(2))})
    problems = consistency_audit(forged)
    assert problems
    assert any("vertex 1" in p for p in problems)


def test_unknown_is_not_infinite():
    A = fixture("FX4")
    r = analyze(A, AnalysisOptions(depth=2, cycles=1, max_dim=60))
    assert r.vertices["1"].pd.kind == "unknown"
    assert r.gldim.kind == "unknown"
    assert consistency_audit(r) == []


def test_threads_do_not_change_the_report():
    A = fixture("FX3")
    opts = AnalysisOptions(depth=8, cycles=4, lambda_e=[["1", "2", "3"]], max_dim=60)
    assert analyze(A, opts) == analyze(A, replace(opts, threads=4))
