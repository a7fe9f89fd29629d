"""The commutator quotient ``HH_0``, Hattori-Stallings traces and e-traces.

Classes in ``HH_0(A) = A / [A, A]`` are stored canonically: a basis vector
is reduced against the echelon basis of the commutator subspace and the
surviving coordinates are kept.  Elimination runs over the basis in
reverse order so that long paths are eliminated first and the chosen
representatives are as short as possible (trivial paths where they can be).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraElement, BoundQuiverAlgebra, QuotientAlgebra, as_idempotent, lambda_e
from .errors import HorizonNotReached
from .linalg import Subspace
from .modules import (
    FDModule,
    LambdaMatrix,
    ModuleHom,
    ProjectiveSum,
    induced_on_quotient,
    left_multiplication,
    quotient,
    regular_module,
    restrict_hom,
    right_ideal,
)
from .resolution import (
    Resolution,
    e_bounded_horizon,
    find_syzygy_periodicity,
    horseshoe,
    injective_dimension_semisimple,
    lift_endomorphism,
    minimal_resolution,
)


def _commutator_vectors(A: BoundQuiverAlgebra) -> List[list]:
    vecs = []
    for i, p in enumerate(A.basis):
        # b_i b_j - b_j b_i vanishes unless one of the products is composable
        partners = set(A.paths_starting(p.target)) | set(A.paths_ending(p.source))
        for j in sorted(partners):
            if j <= i:
                continue
            x = A.basis_element(i) * A.basis_element(j) - A.basis_element(j) * A.basis_element(i)
            if x:
                vecs.append(x.vector())
    return vecs


def commutator_subspace(A: BoundQuiverAlgebra) -> Subspace:
    """``[A, A]`` in basis coordinates."""
    return Subspace(A.field, A.dim, _commutator_vectors(A))


class HH0Space:
    """``A / [A, A]`` with canonical class representatives."""

    def __init__(self, algebra: BoundQuiverAlgebra):
        self.algebra = algebra
        n = algebra.dim
        self._rev = Subspace(algebra.field, n, [v[::-1] for v in _commutator_vectors(algebra)])
        # complement coordinates in the original indexing, increasing
        self.complement: List[int] = sorted(n - 1 - c for c in self._rev.complement())

    @property
    def commutator(self) -> Subspace:
        return commutator_subspace(self.algebra)

    @property
    def dim(self) -> int:
        return len(self.complement)

    def class_of(self, x: AlgebraElement) -> "HH0Class":
        if x.algebra is not self.algebra:
            raise ValueError("element of another algebra")
        n = self.algebra.dim
        red = self._rev.reduce(x.vector()[::-1])
        return HH0Class(self, tuple(red[n - 1 - c] for c in self.complement))

    def zero(self) -> "HH0Class":
        return HH0Class(self, tuple(self.algebra.field.zero for _ in self.complement))

    def in_commutator(self, x: AlgebraElement) -> bool:
        return self.class_of(x).is_zero()

    def basis_representatives(self) -> List[AlgebraElement]:
        return [self.algebra.basis_element(c) for c in self.complement]

    def __repr__(self):
        return f"HH0Space(dim={self.dim})"


@dataclass(frozen=True)
class HH0Class:
    """An element of ``HH_0``, given by coordinates over the complement basis."""

    space: HH0Space = dc_field(compare=False)
    coords: Tuple

    def _check(self, other):
        if other.space is not self.space:
            raise ValueError("classes from different HH_0 spaces")

    def __add__(self, other: "HH0Class") -> "HH0Class":
        self._check(other)
        return HH0Class(self.space, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return HH0Class(self.space, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HH0Class":
        c = self.space.algebra.field(c)
        return HH0Class(self.space, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        if not isinstance(other, HH0Class):
            return NotImplemented
        return self.space is other.space and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def representative(self) -> AlgebraElement:
        A = self.space.algebra
        return A.element({c: x for c, x in zip(self.space.complement, self.coords) if x})

    def __repr__(self):
        return f"HH0Class({self.representative()!r})"


def hh0(A: BoundQuiverAlgebra) -> HH0Space:
    """``HH_0(A)``, cached on the algebra."""
    space = A.__dict__.get("_hh0")
    if space is None:
        space = A.__dict__["_hh0"] = HH0Space(A)
    return space


def is_radical_trivial(A: BoundQuiverAlgebra) -> bool:
    """Whether the radical lies inside ``[A, A]``."""
    H = hh0(A)
    return all(H.in_commutator(A.basis_element(i)) for i in A.radical_indices())


def quotient_for(A: BoundQuiverAlgebra, e) -> QuotientAlgebra:
    """``lambda_e(A, e)`` memoised per vertex set."""
    e = as_idempotent(e)
    cache = A.__dict__.setdefault("_lambda_e_cache", {})
    Q = cache.get(e.vertices)
    if Q is None:
        Q = cache[e.vertices] = lambda_e(A, e)
    return Q


def he_map(A: BoundQuiverAlgebra, e, c: HH0Class) -> HH0Class:
    """The induced map ``HH_0(A) -> HH_0(A_e)``."""
    Q = quotient_for(A, e)
    return hh0(Q.algebra).class_of(Q.project(c.representative()))


# ---------------------------------------------------------------------------
# traces of maps between projectives


def _diagonal_sum(phi: LambdaMatrix) -> AlgebraElement:
    if not phi.is_square():
        raise ValueError("the trace needs an endomorphism")
    phi.check_peirce()
    A = phi.algebra
    total = A.zero()
    for i in range(len(phi.source)):
        total = total + phi.entries[i][i]
    return total


def hs_trace(phi: LambdaMatrix) -> HH0Class:
    """Hattori-Stallings trace: the class of the sum of the diagonal entries."""
    return hh0(phi.algebra).class_of(_diagonal_sum(phi))


def e_trace_projective(A: BoundQuiverAlgebra, e, phi: LambdaMatrix) -> HH0Class:
    """``H_e`` applied to the trace of an endomorphism of a projective."""
    Q = quotient_for(A, e)
    return hh0(Q.algebra).class_of(Q.project(_diagonal_sum(phi)))


def left_multiplication_matrix(A: BoundQuiverAlgebra, a: AlgebraElement, s=None) -> LambdaMatrix:
    """Left multiplication by ``a`` as a matrix on ``e_{v_1}A + ... + e_{v_r}A``.

    Entry ``(t, u)`` is ``e_t a e_u``.  With every vertex listed once (the
    default) this is the endomorphism ``x -> a x`` of the regular module.
    """
    s = ProjectiveSum(A.vertices if s is None else s)
    ents = [[A.trivial(t) * a * A.trivial(u) for u in s] for t in s]
    return LambdaMatrix(A, s, s, ents)


# ---------------------------------------------------------------------------
# e-traces of module endomorphisms


def _alternating_sum(A, e, lifts: Sequence[LambdaMatrix], m: int) -> HH0Class:
    Q = quotient_for(A, e)
    H = hh0(Q.algebra)
    total = H.zero()
    for i in range(m):
        t = e_trace_projective(A, e, lifts[i])
        total = total + t if i % 2 == 0 else total - t
    return total


def e_trace_along(phi: ModuleHom, res: Resolution, e, horizon: int,
                  rng: Optional[random.Random] = None) -> HH0Class:
    """``sum (-1)^i tr_e(phi_i)`` over ``i < horizon`` along a given resolution.

    The caller vouches that every term from ``horizon`` on has top killed by ``e``.
    """
    if horizon > len(res.terms):
        raise ValueError("horizon beyond the computed terms")
    lifts = lift_endomorphism(phi, res, upto=horizon, rng=rng)
    return _alternating_sum(res.algebra, e, lifts, horizon)


@dataclass
class TraceContext:
    """Shared data for e-trace computations over one algebra and idempotent.

    ``injective_dim`` is ``id S_e`` when the opposite-side resolution
    terminated within ``depth_cap``, else None.
    """

    algebra: BoundQuiverAlgebra
    e: object
    depth_cap: int
    injective_dim: Optional[int]
    max_dim: Optional[int] = None

    @classmethod
    def build(cls, A: BoundQuiverAlgebra, e, depth_cap: int, max_dim: Optional[int] = None):
        e = as_idempotent(e)
        idim = injective_dimension_semisimple(A, e, depth_cap, max_dim)
        return cls(A, e, depth_cap, idim, max_dim)

    def resolve(self, M: FDModule) -> Tuple[Resolution, int]:
        """Minimal resolution of ``M`` and its certified e-bounded horizon."""
        depth = self.depth_cap if self.injective_dim is None else self.injective_dim + 1
        res = minimal_resolution(M, depth, self.max_dim)
        m = e_bounded_horizon(res, self.e, self.injective_dim)
        if m is None and not res.terminated:
            per = find_syzygy_periodicity(res)
            if per is not None:
                m = e_bounded_horizon(res, self.e, periodicity=per[:2])
        if m is None:
            raise HorizonNotReached(self.depth_cap, "tops keep meeting e or nothing certifies them")
        return res, m


def e_trace_module(A: BoundQuiverAlgebra, e, phi: ModuleHom, depth_cap: int = 12,
                   rng: Optional[random.Random] = None,
                   context: Optional[TraceContext] = None) -> HH0Class:
    """e-trace of a module endomorphism along its minimal resolution.

    Raises HorizonNotReached when no e-bounded horizon can be certified
    within ``depth_cap``.
    """
    if phi.source is not phi.target:
        raise ValueError("phi must be an endomorphism")
    ctx = context or TraceContext.build(A, e, depth_cap)
    res, m = ctx.resolve(phi.source)
    lifts = lift_endomorphism(phi, res, upto=m, rng=rng)
    return _alternating_sum(A, ctx.e, lifts, m)


# ---------------------------------------------------------------------------
# the filtration argument for radical-triviality of HH_0(A_e)


@dataclass
class FiltrationCertificate:
    """Record of the filtration ``a^i A`` argument for one radical element ``a``.

    ``traces[i]`` is the e-trace of left multiplication by ``a`` on ``a^i A``;
    ``additivity`` holds the horseshoe-side value for every step, which must
    equal ``traces[i + 1]`` (the quotient map is zero).  ``direct`` records
    whether the image of ``a`` lies in the commutator subspace of ``A_e``.
    """

    nilpotency: int
    traces: List[HH0Class]
    additivity: List[HH0Class]
    direct: bool

    @property
    def chain_holds(self) -> bool:
        ok = all(t == self.traces[-1] for t in self.traces)
        ok = ok and all(x == y for x, y in zip(self.additivity, self.traces[1:]))
        return ok and self.traces[-1].is_zero()

    @property
    def certified(self) -> bool:
        return self.chain_holds and self.direct


def filtration_certificate(A: BoundQuiverAlgebra, e, a: AlgebraElement, depth_cap: int = 12,
                           context: Optional[TraceContext] = None) -> FiltrationCertificate:
    """Replay the filtration ``A = M_0 > aA > a^2 A > ... > a^r A = 0``.

    Raises HorizonNotReached when some ``M_i`` has no certified e-bounded
    horizon within ``depth_cap``.
    """
    if not a.in_radical():
        raise ValueError("a must lie in the radical")
    ctx = context or TraceContext.build(A, e, depth_cap)
    Q = quotient_for(A, e)
    H = hh0(Q.algebra)
    # least r with a^r = 0 (r = 1 for a = 0)
    r, power = 1, a
    while power:
        power = power * a
        r += 1
    lm = left_multiplication(A, a)
    modules = []
    for i in range(r + 1):
        gen = A.one() if i == 0 else a ** i
        M, inc = right_ideal(A, [gen])
        modules.append((M, inc, restrict_hom(lm, inc, inc)))
    traces = []
    resolutions = []
    for M, inc, phi in modules:
        if M.is_zero():
            traces.append(H.zero())
            resolutions.append(None)
            continue
        res, m = ctx.resolve(M)
        resolutions.append((res, m))
        lifts = lift_endomorphism(phi, res, upto=m)
        traces.append(_alternating_sum(A, ctx.e, lifts, m))
    additivity = []
    for i in range(r):
        M, inc, phi = modules[i]
        L, incL, phiL = modules[i + 1]
        if M.is_zero():
            additivity.append(H.zero())
            continue
        # 0 -> M_{i+1} -> M_i -> M_i / M_{i+1} -> 0 with phi zero on the quotient
        u = restrict_hom(ModuleHom.identity(regular_module(A)), incL, inc)
        N, proj = quotient(M, u.image())
        if L.is_zero():
            additivity.append(traces[i])
            continue
        res_L, mL = resolutions[i + 1]
        res_N, mN = ctx.resolve(N)
        height = max(mL, mN)
        res_L = _extend(res_L, height, ctx)
        res_N = _extend(res_N, height, ctx)
        res_M, _, _ = horseshoe(u, proj, res_L, res_N)
        value = e_trace_along(phi, res_M, ctx.e, height)
        phiN = induced_on_quotient(phi, proj, proj)
        if not phiN.is_zero():
            raise AssertionError("left multiplication by a is not zero on M_i / M_(i+1)")
        additivity.append(value)
    direct = H.in_commutator(Q.project(a))
    return FiltrationCertificate(r, traces, additivity, direct)


def _extend(res: Resolution, height: int, ctx: TraceContext) -> Resolution:
    """``res`` recomputed so that at least ``height`` terms exist (when not terminated)."""
    if res.terminated or len(res.terms) >= height:
        return res
    return minimal_resolution(res.module, height, ctx.max_dim)
