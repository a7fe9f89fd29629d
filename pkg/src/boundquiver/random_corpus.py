"""Seeded random algebras, modules and maps for property tests and audits.

Every generator takes a ``random.Random`` so results are reproducible from
a seed.  Algebras are kept small (at most five vertices and eight arrows)
and are made admissible by adding every path of a chosen length to the
relations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .algebra import AlgebraElement, BoundQuiverAlgebra, build_algebra
from .linalg import QQ, Field, GF
from .modules import (
    FDModule,
    LambdaMatrix,
    ModuleHom,
    ProjectiveSum,
    generated_subspaces,
    hom_space,
    induced_on_quotient,
    projective,
    quotient,
    restrict_hom,
    submodule_from_subspaces,
)
from .quiver import PathVector, Quiver, paths_from

FIELDS = (QQ, GF(2), GF(3), GF(5))


def random_scalar(rng: random.Random, field: Field, nonzero: bool = False):
    lo, hi = (0, field.p - 1) if field.is_prime else (-3, 3)
    while True:
        c = field(rng.randint(lo, hi))
        if c or not nonzero:
            return c


def random_quiver(rng: random.Random, max_vertices: int = 5, max_arrows: int = 8,
                  loop_weight: float = 0.15) -> Quiver:
    nv = rng.randint(1, max_vertices)
    na = rng.randint(1, max_arrows)
    vertices = list(range(1, nv + 1))
    arrows = []
    for k in range(na):
        s = rng.choice(vertices)
        if nv == 1 or rng.random() < loop_weight:
            t = s
        else:
            t = rng.choice([v for v in vertices if v != s])
        arrows.append((f"a{k}", s, t))
    return Quiver(vertices, arrows)


def random_algebra(rng: random.Random, field: Optional[Field] = None, monomial: Optional[bool] = None,
                   max_vertices: int = 5, max_arrows: int = 8,
                   length_cap: Optional[int] = None, max_dim: int = 40) -> BoundQuiverAlgebra:
    """A random ``kQ/I`` with every path of length ``length_cap`` in ``I``.

    Draws are repeated (from the same generator) until the dimension is at
    most ``max_dim``.
    """
    field = field or rng.choice(FIELDS)
    monomial = rng.random() < 0.4 if monomial is None else monomial
    while True:
        A = _draw_algebra(rng, field, monomial, max_vertices, max_arrows, length_cap)
        if A.dim <= max_dim:
            return A


def _draw_algebra(rng, field, monomial, max_vertices, max_arrows, length_cap):
    q = random_quiver(rng, max_vertices, max_arrows)
    cap_len = length_cap or rng.randint(2, 4)
    rels: List[PathVector] = []
    by_ends = {}
    for v in q.vertices:
        for p in paths_from(q, v, cap_len):
            if 2 <= p.length < cap_len:
                by_ends.setdefault((p.source, p.target), []).append(p)
            elif p.length == cap_len:
                rels.append(PathVector.of(p, 1, field))
    keys = sorted(by_ends, key=lambda k: (q.vertex_index[k[0]], q.vertex_index[k[1]]))
    for _ in range(rng.randint(0, 3) if keys else 0):
        paths = by_ends[rng.choice(keys)]
        if monomial:
            rels.append(PathVector.of(rng.choice(paths), 1, field))
        else:
            chosen = rng.sample(paths, min(len(paths), rng.randint(1, 3)))
            terms = {p: random_scalar(rng, field, nonzero=True) for p in chosen}
            rels.append(PathVector(terms, field))
    return build_algebra(q, rels, cap=cap_len, field=field)


@dataclass
class CorpusEntry:
    seed: int
    algebra: BoundQuiverAlgebra
    monomial: bool


def corpus(count: int, seed: int = 0, **kwargs) -> List[CorpusEntry]:
    """``count`` random algebras, the ``i``-th drawn from seed ``seed + i``."""
    out = []
    for i in range(count):
        rng = random.Random(seed + i)
        monomial = rng.random() < 0.4
        out.append(CorpusEntry(seed + i, random_algebra(rng, monomial=monomial, **kwargs), monomial))
    return out


# ---------------------------------------------------------------------------
# elements and maps


def random_element(rng: random.Random, A: BoundQuiverAlgebra, indices: Optional[Sequence[int]] = None,
                   density: float = 0.6) -> AlgebraElement:
    idx = range(A.dim) if indices is None else indices
    return A.element({k: random_scalar(rng, A.field) for k in idx if rng.random() < density})


def random_radical_element(rng: random.Random, A: BoundQuiverAlgebra) -> AlgebraElement:
    return random_element(rng, A, A.radical_indices())


def random_projective_sum(rng: random.Random, A: BoundQuiverAlgebra, max_size: int = 3) -> ProjectiveSum:
    return ProjectiveSum(rng.choice(A.vertices) for _ in range(rng.randint(1, max_size)))


def random_lambda_matrix(rng: random.Random, A: BoundQuiverAlgebra, source, target,
                         radical: bool = False) -> LambdaMatrix:
    ents = []
    for t in target:
        row = []
        for s in source:
            idx = [k for k in A.peirce_indices(t, s) if not radical or A.basis[k].length]
            row.append(random_element(rng, A, idx))
        ents.append(row)
    return LambdaMatrix(A, source, target, ents)


def random_invertible_lambda_matrix(rng: random.Random, A: BoundQuiverAlgebra, s) -> LambdaMatrix:
    """Upper triangular modulo the radical with unit diagonal scalars, hence invertible."""
    s = ProjectiveSum(s)
    ents = []
    for i, t in enumerate(s):
        row = []
        for j, u in enumerate(s):
            x = random_element(rng, A, [k for k in A.peirce_indices(t, u) if A.basis[k].length])
            if t == u and i == j:
                x = x + A.trivial(t).scale(random_scalar(rng, A.field, nonzero=True))
            elif t == u and i < j:
                x = x + A.trivial(t).scale(random_scalar(rng, A.field))
            row.append(x)
        ents.append(row)
    return LambdaMatrix(A, s, s, ents)


def lambda_inverse(phi: LambdaMatrix) -> LambdaMatrix:
    return LambdaMatrix.from_hom(phi.to_hom().inverse())


# ---------------------------------------------------------------------------
# modules


def random_module(rng: random.Random, A: BoundQuiverAlgebra, max_summands: int = 2,
                  max_relations: int = 2) -> FDModule:
    """``P / U`` with ``P`` a random projective and ``U`` generated by random vectors."""
    P = projective(A, random_projective_sum(rng, A, max_summands))
    gens = []
    for _ in range(rng.randint(0, max_relations)):
        w = rng.choice(A.vertices)
        if P.dims[w]:
            gens.append((w, [random_scalar(rng, A.field) for _ in range(P.dims[w])]))
    M, _ = quotient(P, generated_subspaces(P, gens))
    return M


def random_endomorphism(rng: random.Random, M: FDModule) -> ModuleHom:
    H = hom_space(M, M)
    out = ModuleHom.zero(M, M)
    for h in H:
        c = random_scalar(rng, M.field)
        if c:
            out = out + h.scale(c)
    return out


@dataclass
class SESDiagram:
    """``0 -> L -u-> M -v-> N -> 0`` with compatible endomorphisms."""

    u: ModuleHom
    v: ModuleHom
    phi_L: ModuleHom
    phi_M: ModuleHom
    phi_N: ModuleHom


def random_ses(rng: random.Random, A: BoundQuiverAlgebra, M: Optional[FDModule] = None) -> SESDiagram:
    """Take ``L`` generated by a random vector and its images under ``phi_M``."""
    M = M or random_module(rng, A)
    phi = random_endomorphism(rng, M)
    w = rng.choice(A.vertices)
    gens = []
    if M.dims[w]:
        x = [random_scalar(rng, M.field) for _ in range(M.dims[w])]
        for _ in range(M.total_dim + 1):
            gens.append((w, x))
            x = phi.apply(w, x)
    subs = generated_subspaces(M, gens)
    L, u = submodule_from_subspaces(M, subs)
    N, v = quotient(M, subs)
    return SESDiagram(u, v, restrict_hom(phi, u, u), phi, induced_on_quotient(phi, v, v))
