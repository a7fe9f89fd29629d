"""Acceptance suite: one test per criterion, each reporting a PASS or FAIL line."""

import random
from dataclasses import replace
from itertools import combinations

import pytest

from boundquiver.description import parse
from boundquiver.errors import HorizonNotReached, NotAdmissible, ParseError
from boundquiver.fixtures import NAMES, fixture, fixture_over
from boundquiver.hochschild import (
    TraceContext,
    e_trace_along,
    e_trace_module,
    e_trace_projective,
    filtration_certificate,
    hh0,
    hs_trace,
    is_radical_trivial,
    left_multiplication_matrix,
    quotient_for,
)
from boundquiver.modules import LambdaMatrix, ProjectiveSum, simple
from boundquiver.noloop import (
    AnalysisOptions,
    DimensionStatus,
    analyze,
    consistency_audit,
    enumerate_cycles,
    extension_quiver,
    is_cyclically_free,
    is_cyclically_nonzero,
)
from boundquiver.random_corpus import (
    SESDiagram,
    corpus,
    lambda_inverse,
    random_element,
    random_endomorphism,
    random_invertible_lambda_matrix,
    random_lambda_matrix,
    random_module,
    random_projective_sum,
    random_radical_element,
    random_ses,
)
from boundquiver.resolution import (
    ext_self_dims,
    horseshoe,
    injective_dimension_simple,
    minimal_resolution,
    pad_resolution,
    periodicity_certificate,
    simple_resolution,
)

from fixture_data import oracle_for

FIELD_TAGS = (0, 2, 3)
OPTS = AnalysisOptions(depth=10, cycles=4, max_dim=60)
SELF_INJECTIVE = ("FX2", "FX4")


# -- 1-4: fixture regressions ---------------------------------------------------------------


def is_oriented_cycle(Q) -> bool:
    """Every vertex has one outgoing and one incoming arrow and they form a single cycle."""
    if len(Q.arrows) != len(Q.vertices):
        return False
    if any(len(Q.arrows_from(v)) != 1 or len(Q.arrows_into(v)) != 1 for v in Q.vertices):
        return False
    seen, v = set(), Q.vertices[0]
    while v not in seen:
        seen.add(v)
        v = Q.arrows_from(v)[0].target
    return len(seen) == len(Q.vertices)


def test_criterion_1_fx3(criterion):
    with criterion(1, "FX3 regression"):
        A = fixture("FX3")
        assert A.dim == 11
        assert [simple_resolution(A, v, 10).projective_dimension for v in A.vertices] == [4, 3, 2, 3]
        e = ["1", "2", "3"]
        rep = analyze(A, replace(OPTS, lambda_e=[e]))
        assert rep.gldim == DimensionStatus.finite(4)
        assert hh0(A).dim == 4 and is_radical_trivial(A)
        B = quotient_for(A, e).algebra
        assert B.dim == 6
        assert B.nilpotency_degree == 2
        assert len(B.vertices) == 3 and is_oriented_cycle(B.quiver)
        assert hh0(B).dim == 3 and is_radical_trivial(B)
        for v in B.vertices:
            cert = periodicity_certificate(B, v, 6)
            assert cert is not None and cert[1] <= 6 and cert[2].is_iso()
        (qs,) = rep.quotients
        assert qs.gldim.kind == "infinite"
        assert consistency_audit(rep) == []


def test_criterion_2_fx2(criterion):
    with criterion(2, "FX2 regression"):
        A = fixture("FX2")
        rep = analyze(A, OPTS)
        assert [c.vertex for c in rep.loop_certificates] == ["1"]
        i, j, iso = periodicity_certificate(A, "1", 6)
        assert (i, j) == (0, 1) and iso.is_iso()
        assert ext_self_dims(A, "1", 10) == [1] * 10
        assert hh0(A).dim == 2 and not is_radical_trivial(A)
        (cert,) = rep.cycle_certificates
        assert str(cert.cycle) == "alpha" and cert.cyclically_free
        # a free cycle forces both sides to be infinite, and the resolutions never stop
        v = rep.vertices["1"]
        assert v.pd.kind == "infinite" and v.id.kind == "infinite"
        assert not simple_resolution(A, "1", 10).terminated
        assert injective_dimension_simple(A, "1", 10) is None
        assert consistency_audit(rep) == []


def test_criterion_3_fx4(criterion):
    with criterion(3, "FX4 regression"):
        A = fixture("FX4")
        c = A.quiver.path(["alpha", "beta"])
        assert is_cyclically_nonzero(A, c) and is_cyclically_free(A, c)
        for cyc in enumerate_cycles(A, 6):
            assert is_cyclically_nonzero(A, cyc) == is_cyclically_free(A, cyc)
        rep = analyze(A, OPTS)
        assert rep.gldim.kind == "infinite"
        i, j, iso = periodicity_certificate(A, "1", 8)
        assert (i, j) == (0, 4) and iso.is_iso()
        res = simple_resolution(A, "1", 8)
        assert res.syzygy_module(2).dim_vector() == simple(A, "2").dim_vector()
        assert consistency_audit(rep) == []


def test_criterion_4_hereditary(criterion):
    with criterion(4, "FX1/FX5 regression"):
        for name in ("FX1", "FX5"):
            A = fixture(name)
            rep = analyze(A, OPTS)
            assert rep.gldim == DimensionStatus.finite(1)
            assert hh0(A).dim == 2 and is_radical_trivial(A)
        assert extension_quiver(fixture("FX5")) == [("1", "2", 2)]


# -- 5: trace laws on projectives ------------------------------------------------------------


def permutation_matrix(A, s, order) -> LambdaMatrix:
    """The isomorphism ``s -> s'`` with ``s'[i] = s[order[i]]``."""
    target = ProjectiveSum(s[k] for k in order)
    ents = [[A.trivial(t) if j == order[i] else A.zero() for j in range(len(s))]
            for i, t in enumerate(target)]
    return LambdaMatrix(A, s, target, ents)


def trace_law_instance(rng, A, H):
    s, t = random_projective_sum(rng, A), random_projective_sum(rng, A)
    f, g = random_lambda_matrix(rng, A, s, s), random_lambda_matrix(rng, A, s, s)
    # additivity
    assert hs_trace(f + g) == hs_trace(f) + hs_trace(g)
    # tr(phi psi) = tr(psi phi) for rectangular pairs
    phi, psi = random_lambda_matrix(rng, A, s, t), random_lambda_matrix(rng, A, t, s)
    assert hs_trace(phi @ psi) == hs_trace(psi @ phi)
    # block matrices on s + t
    h = random_lambda_matrix(rng, A, t, t)
    block = LambdaMatrix.blocks([[f, psi], [phi, h]])
    assert hs_trace(block) == hs_trace(f) + hs_trace(h)
    # conjugation by an isomorphism onto a reordered sum
    order = list(range(len(s)))
    rng.shuffle(order)
    iso = permutation_matrix(A, s, order) @ random_invertible_lambda_matrix(rng, A, s)
    assert hs_trace(iso @ f @ lambda_inverse(iso)) == hs_trace(f)
    # left multiplication on the regular module
    a = random_element(rng, A)
    assert hs_trace(left_multiplication_matrix(A, a)) == H.class_of(a)


@pytest.fixture(scope="module")
def fixtures_over_fields():
    return {(n, p): fixture_over(n, p) for n in NAMES for p in FIELD_TAGS}


def test_criterion_5_trace_laws(criterion, fixtures_over_fields):
    with criterion(5, "trace law suite"):
        rng = random.Random(5)
        for (name, p), A in fixtures_over_fields.items():
            H = hh0(A)
            for _ in range(200):
                trace_law_instance(rng, A, H)
        # e-trace of an endomorphism of an e-avoiding projective vanishes
        count = 0
        for name in NAMES:
            A = fixture(name)
            vs = list(A.vertices)
            while count < 100 * (NAMES.index(name) + 1):
                e = set(rng.sample(vs, rng.randint(0, len(vs) - 1)))
                rest = [v for v in vs if v not in e]
                s = [rng.choice(rest) for _ in range(rng.randint(1, 3))]
                phi = random_lambda_matrix(rng, A, s, s)
                assert e_trace_projective(A, e, phi).is_zero()
                count += 1
        assert count >= 100


# -- 6-7: e-traces of module endomorphisms ----------------------------------------------------


def random_idempotent(rng, A):
    vs = list(A.vertices)
    return frozenset(rng.sample(vs, rng.randint(1, len(vs))))


def context_for(cache, A, e):
    if e not in cache:
        cache[e] = TraceContext.build(A, e, 10, max_dim=60)
    return cache[e]


def bounded_modules(rng, A, cache, count, deep):
    """Non-zero random modules with a certified e-bounded horizon for a random ``e``.

    At least ``deep`` of them are not projective.
    """
    deep_mods, flat_mods = [], []
    while len(deep_mods) < deep or len(deep_mods) + len(flat_mods) < count:
        e = random_idempotent(rng, A)
        ctx = context_for(cache, A, e)
        M = random_module(rng, A, max_summands=3)
        if M.is_zero():
            continue
        try:
            res, m = ctx.resolve(M)
        except HorizonNotReached:
            continue
        if len(res.terms) > 1:
            deep_mods.append((e, ctx, M, res, m))
        elif len(flat_mods) < count - deep:
            flat_mods.append((e, ctx, M, res, m))
    return deep_mods + flat_mods


def padded_trace(rng, phi, res, e, m):
    """The e-trace along ``res`` with a split acyclic piece added at a random degree."""
    top = len(res.terms) if res.terminated else len(res.terms) - 1
    if top <= 0:
        pos, extra = 0, [rng.choice(res.algebra.vertices)]
        padded = pad_resolution(res, pos, extra) if res.terms else res
    else:
        pos = rng.randrange(top)
        padded = pad_resolution(res, pos, [rng.choice(res.algebra.vertices)])
    assert padded.verify_exact()
    # the added piece sits in degrees pos, pos + 1, so the horizon may move past it
    horizon = max(m, pos + 2) if res.terms else m
    horizon = min(horizon, len(padded.terms))
    return e_trace_along(phi, padded, e, horizon, rng=rng)


def test_criterion_6_well_defined(criterion):
    with criterion(6, "well-definedness suite"):
        rng = random.Random(6)
        nonzero = 0
        for name in NAMES:
            A = fixture(name)
            cache = {}
            # over the self-injective FX2 and FX4 only projectives have a horizon for e != 0
            deep = 0 if name in SELF_INJECTIVE else 10
            mods = bounded_modules(rng, A, cache, 20, deep)
            assert len(mods) >= 20
            for e, ctx, M, res, m in mods:
                phi = random_endomorphism(rng, M)
                base = e_trace_module(A, e, phi, context=ctx)
                # two independent lifts along the minimal resolution
                assert e_trace_along(phi, res, e, m, rng=random.Random(rng.random())) == base
                assert e_trace_along(phi, res, e, m, rng=random.Random(rng.random())) == base
                # a padded, non-minimal resolution
                deep = res if res.terminated else minimal_resolution(M, m + 3, ctx.max_dim)
                assert padded_trace(rng, phi, deep, e, m) == base
                nonzero += not base.is_zero()
        assert nonzero >= 20


def deepen(ctx, M, res, height):
    if res.terminated or len(res.terms) > height:
        return res
    return minimal_resolution(M, height + 1, ctx.max_dim)


def projective_ses(rng, A):
    """``0 -> P -> P + P' -> P' -> 0`` with a block upper triangular middle endomorphism."""
    s1, s2 = random_projective_sum(rng, A), random_projective_sum(rng, A)
    f, h = random_lambda_matrix(rng, A, s1, s1), random_lambda_matrix(rng, A, s2, s2)
    x = random_lambda_matrix(rng, A, s2, s1)
    phi = LambdaMatrix.blocks([[f, x], [LambdaMatrix.zero(A, s1, s2), h]])
    u = LambdaMatrix.blocks([[LambdaMatrix.identity(A, s1)], [LambdaMatrix.zero(A, s1, s2)]])
    v = LambdaMatrix.blocks([[LambdaMatrix.zero(A, s1, s2), LambdaMatrix.identity(A, s2)]])
    return SESDiagram(u.to_hom(), v.to_hom(), f.to_hom(), phi.to_hom(), h.to_hom())


def bounded_ses(rng, A, cache, attempts=50):
    """A random diagram whose outer terms are non-zero and have certified horizons."""
    for _ in range(attempts):
        e = random_idempotent(rng, A)
        ctx = context_for(cache, A, e)
        ses = random_ses(rng, A)
        L, N = ses.u.source, ses.v.target
        if L.is_zero() or N.is_zero():
            continue
        try:
            return e, ctx, ses, ctx.resolve(L), ctx.resolve(N)
        except HorizonNotReached:
            continue
    e = random_idempotent(rng, A)
    ctx = context_for(cache, A, e)
    ses = projective_ses(rng, A)
    return e, ctx, ses, ctx.resolve(ses.u.source), ctx.resolve(ses.v.target)


def test_criterion_7_additivity(criterion):
    with criterion(7, "additivity suite"):
        rng = random.Random(7)
        deep_cases = nonzero = 0
        for name in NAMES:
            A = fixture(name)
            cache = {}
            for _ in range(20):
                e, ctx, ses, (res_L, mL), (res_N, mN) = bounded_ses(rng, A, cache)
                L, N = ses.u.source, ses.v.target
                height = max(mL, mN)
                res_L, res_N = deepen(ctx, L, res_L, height), deepen(ctx, N, res_N, height)
                res_M, _, _ = horseshoe(ses.u, ses.v, res_L, res_N)
                assert res_M.verify_exact()
                tr_M = e_trace_along(ses.phi_M, res_M, e, height)
                tr_L = e_trace_module(A, e, ses.phi_L, context=ctx)
                tr_N = e_trace_module(A, e, ses.phi_N, context=ctx)
                assert tr_M == tr_L + tr_N
                # the middle term also has a horizon of its own, giving the same value
                assert e_trace_module(A, e, ses.phi_M, context=ctx) == tr_M
                deep_cases += height > 1
                nonzero += not tr_M.is_zero()
        assert deep_cases >= 10 and nonzero >= 20


# -- 8: radical-triviality of HH_0(A_e) when id S_e is finite -----------------------------------


def test_criterion_8_radical_trivial_quotients(criterion):
    with criterion(8, "finite id S_e gives radical-trivial HH_0(A_e)"):
        rng = random.Random(8)
        algebras = [fixture(n) for n in NAMES] + [x.algebra for x in corpus(12, seed=8000, max_dim=30)]
        pairs = with_radical = 0
        for A in algebras:
            vs = list(A.vertices)
            for k in range(1, len(vs) + 1):
                for e in combinations(vs, k):
                    ctx = TraceContext.build(A, e, 10, max_dim=60)
                    if ctx.injective_dim is None:
                        continue
                    pairs += 1
                    Q = quotient_for(A, e)
                    with_radical += bool(Q.algebra.radical_indices())
                    assert is_radical_trivial(Q.algebra)
                    assert oracle_for(Q.algebra).radical_trivial()
                    H = hh0(Q.algebra)
                    for _ in range(20):
                        a = random_radical_element(rng, A)
                        cert = filtration_certificate(A, e, a, context=ctx)
                        assert cert.chain_holds and cert.certified
                        assert H.in_commutator(Q.project(a))
        assert pairs >= 20 and with_radical >= 10


# -- 9: soundness audits ------------------------------------------------------------------------


def test_criterion_9_soundness(criterion):
    with criterion(9, "soundness audits on 100 random algebras"):
        opts = AnalysisOptions(depth=12, cycles=4, max_dim=40)
        entries = corpus(100, seed=9000, max_dim=40)
        assert len(entries) == 100
        for entry in entries:
            rep = analyze(entry.algebra, opts)
            assert consistency_audit(rep) == [], entry.seed
            loops = {c.vertex for c in rep.loop_certificates}
            for v in loops:
                vr = rep.vertices[v]
                assert vr.pd.kind != "finite" and vr.id.kind != "finite"
            for c in rep.cycle_certificates:
                if c.cyclically_free:
                    for side in ("pd", "id"):
                        assert not all(getattr(rep.vertices[v], side).kind == "finite"
                                       for v in c.support)
            if rep.gldim.kind == "finite":
                assert rep.radical_trivial


# -- 10: negative tests -------------------------------------------------------------------------


def test_criterion_10_negative(criterion):
    with criterion(10, "negative tests"):
        with pytest.raises(NotAdmissible):
            parse("field Q\nvertex 1 2\narrow x 1 1\narrow a 1 2\noption cap 10\n").build()
        with pytest.raises(ParseError) as exc:
            parse("field Q\nvertex 1 2\narrow alpha 1 2\narrow beta 2 1\nrelation alpha*alpha\n")
        assert (exc.value.line, exc.value.column, exc.value.token) == (5, 10, "alpha*alpha")
        rep = analyze(fixture("FX2"), OPTS)
        forged = replace(rep, vertices={"1": replace(rep.vertices["1"], pd=DimensionStatus.finite(2))})
        assert consistency_audit(forged)
