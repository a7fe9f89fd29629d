"""Loops, cycles, minimal relations and certificates of infinite dimension.

Infinite projective or injective dimension is only ever asserted with a
certificate: a loop at the vertex, a cyclically free cycle (attributed to
the semisimple module on its support), or a verified isomorphism between
two syzygies.  Running out of depth gives the status ``unknown``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import BoundQuiverAlgebra
from .hochschild import hh0, is_radical_trivial, quotient_for
from .linalg import Subspace
from .quiver import (
    Path,
    canonical_rotation,
    closed_paths,
    cyclic_permutations,
    is_primitive,
    paths_from,
    support,
)
from .resolution import find_syzygy_periodicity, simple_resolution


# ---------------------------------------------------------------------------
# minimal relations


@dataclass
class RelationSpace:
    """``e_a I e_b`` inside the span of the paths ``a -> b`` of length ``2..n-1``."""

    source: object
    target: object
    paths: List[Path]
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def elements(self):
        """The echelon basis as ``{path: coefficient}`` dictionaries."""
        return [{p: c for p, c in zip(self.paths, row) if c} for row in self.space.basis]


def relation_space(A: BoundQuiverAlgebra, a, b) -> RelationSpace:
    n = A.nilpotency_degree
    paths = [p for p in paths_from(A.quiver, a, n - 1) if p.target == b and p.length >= 2]
    paths.sort(key=A.quiver.path_key)
    pos = {p: i for i, p in enumerate(paths)}
    rows = []
    for row in A.ideal_block(a, b).values():
        vec = [A.field.zero] * len(paths)
        for p, c in row.items():
            vec[pos[p]] = c
        rows.append(vec)
    return RelationSpace(a, b, paths, Subspace(A.field, len(paths), rows))


def is_minimal_relation_summand(A: BoundQuiverAlgebra, q: Path) -> bool:
    """Whether ``q`` occurs with non-zero coefficient in some minimal relation.

    A support-minimal element of ``{w in I : q in supp(w)}`` is a minimal
    relation, so it is enough that the ``q``-coordinate does not vanish on
    the relation space.  Paths of length at least ``n`` lie in ``I``
    themselves and count as (one-term) minimal relations.
    """
    if q.length < 2:
        return False
    if q.length >= A.nilpotency_degree:
        return True
    W = relation_space(A, q.source, q.target)
    k = W.paths.index(q)
    return any(row[k] for row in W.space.basis)


def is_cyclically_free(A: BoundQuiverAlgebra, c: Path) -> bool:
    return not any(is_minimal_relation_summand(A, s) for s in cyclic_permutations(A.quiver, c))


def is_cyclically_nonzero(A: BoundQuiverAlgebra, c: Path) -> bool:
    return not any(A.reduce(s).is_zero() for s in cyclic_permutations(A.quiver, c))


def enumerate_cycles(A: BoundQuiverAlgebra, max_length: int) -> List[Path]:
    """One canonical rotation per class of primitive cycles of length ``<= max_length``."""
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    q = A.quiver
    seen = set()
    out = []
    for c in closed_paths(q, max_length):
        if not is_primitive(q, c):
            continue
        r = canonical_rotation(q, c)
        if r not in seen:
            seen.add(r)
            out.append(r)
    out.sort(key=q.path_key)
    return out


def local_commutativity(A: BoundQuiverAlgebra, v) -> bool:
    """Whether ``e (A / J^2) e`` is commutative for ``e`` the trivial path at ``v``.

    ``J^2`` is spanned by the basis paths of length at least two because
    every relation lives in the square of the arrow ideal.
    """
    idx = [k for k in A.peirce_indices(v, v) if A.basis[k].length <= 1]
    for x in idx:
        for y in idx:
            if y <= x:
                continue
            bx, by = A.basis_element(x), A.basis_element(y)
            comm = bx * by - by * bx
            if any(A.basis[k].length <= 1 for k in comm.coords):
                return False
    return True


def extension_quiver(A: BoundQuiverAlgebra) -> List[Tuple[object, object, int]]:
    """``(i, j, dim Ext^1(S_i, S_j))`` for every pair with a non-zero group."""
    out = []
    for i in A.vertices:
        res = simple_resolution(A, i, 1)
        for j in A.vertices:
            m = res.top_multiplicity(1, j)
            if m:
                out.append((i, j, m))
    return out


# ---------------------------------------------------------------------------
# report records


@dataclass
class DimensionStatus:
    """``kind`` is ``finite``, ``infinite`` or ``unknown``."""

    kind: str
    value: Optional[int] = None
    reason: str = ""
    depth: Optional[int] = None

    @classmethod
    def finite(cls, value: int):
        return cls("finite", value=value)

    @classmethod
    def infinite(cls, reason: str):
        return cls("infinite", reason=reason)

    @classmethod
    def unknown(cls, depth: int):
        return cls("unknown", depth=depth)


@dataclass
class LoopCertificate:
    vertex: object
    loops: List[str]
    ext1_self: int
    consequence: str = "pd S_v = inf and id S_v = inf"


@dataclass
class CycleCertificate:
    cycle: Path
    permutations: List[Path]
    support: frozenset
    cyclically_free: bool
    cyclically_nonzero: bool
    # whether the class of the cycle in HH_0 of A_e (e = its support) is non-zero
    hh0_witness: Optional[bool] = None

    @property
    def consequence(self) -> str:
        if self.cyclically_free:
            return "pd S_e = inf and id S_e = inf"
        return ""


@dataclass
class VertexReport:
    vertex: object
    loops: List[str]
    ext1_self: int
    ext_self: List[int]
    pd: DimensionStatus
    id: DimensionStatus
    pd_periodicity: Optional[Tuple[int, int]] = None
    id_periodicity: Optional[Tuple[int, int]] = None
    local_commutative: bool = True


@dataclass
class QuotientSummary:
    vertices: List
    dim: int
    hh0_dim: int
    radical_trivial: bool
    radical_square_zero: bool
    injective_dim_Se: Optional[int]
    gldim: DimensionStatus
    periodicity: Dict = dc_field(default_factory=dict)


@dataclass
class AnalysisOptions:
    depth: int = 12
    cycles: int = 6
    lambda_e: List[List] = dc_field(default_factory=list)
    max_dim: Optional[int] = 400
    seed: int = 0
    # worker threads for the per-vertex resolutions; results do not depend on it
    threads: int = dc_field(default=1, compare=False)


@dataclass
class AnalysisReport:
    algebra_dim: int
    nilpotency_degree: int
    field: str
    vertices: Dict
    loop_certificates: List[LoopCertificate]
    cycle_certificates: List[CycleCertificate]
    hh0_dim: int
    radical_trivial: bool
    gldim: DimensionStatus
    quotients: List[QuotientSummary]
    extension_quiver: List[Tuple]
    options: AnalysisOptions


# ---------------------------------------------------------------------------
# analysis


def cycle_witness(A: BoundQuiverAlgebra, c: Path) -> bool:
    """Whether the image of ``c`` in ``A_e`` (``e`` its support) is outside the commutators."""
    Q = quotient_for(A, support(A.quiver, c))
    return not hh0(Q.algebra).in_commutator(Q.project(A.reduce(c)))


def cycle_certificate(A: BoundQuiverAlgebra, c: Path) -> CycleCertificate:
    q = A.quiver
    free = is_cyclically_free(A, c)
    return CycleCertificate(c, cyclic_permutations(q, c), support(q, c), free,
                            is_cyclically_nonzero(A, c), cycle_witness(A, c) if free else None)


def _side_status(A: BoundQuiverAlgebra, v, opts: AnalysisOptions, loops) -> Tuple[DimensionStatus, Optional[Tuple[int, int]], object]:
    res = simple_resolution(A, v, opts.depth, opts.max_dim)
    if res.terminated:
        return DimensionStatus.finite(res.projective_dimension), None, res
    per = find_syzygy_periodicity(res, seed=opts.seed)
    per_ij = per[:2] if per is not None else None
    if loops:
        return DimensionStatus.infinite("loop"), per_ij, res
    if per_ij is not None:
        return DimensionStatus.infinite(f"syzygy periodicity {per_ij[0]},{per_ij[1]}"), per_ij, res
    return DimensionStatus.unknown(opts.depth), None, res


def _gldim(statuses: Sequence[DimensionStatus], extra_infinite: bool) -> DimensionStatus:
    if statuses and all(s.kind == "finite" for s in statuses):
        return DimensionStatus.finite(max(s.value for s in statuses))
    inf = [s for s in statuses if s.kind == "infinite"]
    if inf:
        return DimensionStatus.infinite(inf[0].reason)
    if extra_infinite:
        return DimensionStatus.infinite("cyclically free cycle")
    depth = max((s.depth or 0) for s in statuses) if statuses else 0
    return DimensionStatus.unknown(depth)


def _quotient_summary(A: BoundQuiverAlgebra, e, opts: AnalysisOptions) -> QuotientSummary:
    Q = quotient_for(A, e)
    B = Q.algebra
    statuses = []
    periodicity = {}
    for v in B.vertices:
        st, per, _ = _side_status(B, v, opts, B.quiver.loops(v))
        statuses.append(st)
        if per is not None:
            periodicity[v] = per
    idim = None
    sides = [simple_resolution(A.opposite(), v, opts.depth, opts.max_dim) for v in Q.idempotent.sorted(A)]
    if all(r.terminated for r in sides):
        idim = max((r.projective_dimension for r in sides), default=-1)
    rsz = all(B.basis[k].length < 2 for k in range(B.dim))
    return QuotientSummary(
        vertices=Q.idempotent.sorted(A), dim=B.dim, hh0_dim=hh0(B).dim,
        radical_trivial=is_radical_trivial(B), radical_square_zero=rsz,
        injective_dim_Se=idim, gldim=_gldim(statuses, False), periodicity=periodicity)


def _vertex_report(A: BoundQuiverAlgebra, Aop: BoundQuiverAlgebra, v, opts: AnalysisOptions) -> VertexReport:
    loops = [a.label for a in A.quiver.loops(v)]
    pd, pd_per, res = _side_status(A, v, opts, loops)
    idst, id_per, _ = _side_status(Aop, v, opts, loops)
    ext_self = [res.top_multiplicity(i, v) for i in range(1, len(res.terms))]
    ext1 = simple_resolution(A, v, 1).top_multiplicity(1, v)
    return VertexReport(v, loops, ext1, ext_self, pd, idst, pd_per, id_per, local_commutativity(A, v))


def analyze(A: BoundQuiverAlgebra, options: Optional[AnalysisOptions] = None) -> AnalysisReport:
    opts = options or AnalysisOptions()
    Aop = A.opposite()
    if opts.threads > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            reports = list(pool.map(lambda v: _vertex_report(A, Aop, v, opts), A.vertices))
    else:
        reports = [_vertex_report(A, Aop, v, opts) for v in A.vertices]
    vertices = {r.vertex: r for r in reports}
    loop_certs = [LoopCertificate(r.vertex, r.loops, r.ext1_self) for r in reports if r.loops]
    cycle_certs = [cycle_certificate(A, c) for c in enumerate_cycles(A, opts.cycles)]
    any_free = any(c.cyclically_free for c in cycle_certs)
    gl = _gldim([vertices[v].pd for v in A.vertices], any_free)
    quotients = [_quotient_summary(A, e, opts) for e in opts.lambda_e]
    return AnalysisReport(
        algebra_dim=A.dim, nilpotency_degree=A.nilpotency_degree, field=A.field.tag,
        vertices=vertices, loop_certificates=loop_certs, cycle_certificates=cycle_certs,
        hh0_dim=hh0(A).dim, radical_trivial=is_radical_trivial(A), gldim=gl,
        quotients=quotients, extension_quiver=extension_quiver(A), options=opts)


# ---------------------------------------------------------------------------
# audit


def consistency_audit(report: AnalysisReport) -> List[str]:
    """Contradictions between the report's statuses and the no-loop implications; empty means pass."""
    out = []
    loops = {c.vertex for c in report.loop_certificates}
    for v, vr in report.vertices.items():
        for side, st, per in (("pd", vr.pd, vr.pd_periodicity), ("id", vr.id, vr.id_periodicity)):
            certified = v in loops or per is not None
            if st.kind == "finite" and certified:
                out.append(f"vertex {v}: {side} finite although infinite {side} is certified")
            if st.kind == "infinite" and st.value is not None:
                out.append(f"vertex {v}: {side} marked infinite with a value")
        if v in loops and vr.ext1_self == 0:
            out.append(f"vertex {v}: loop but Ext^1(S, S) = 0")
        if (vr.pd.kind == "finite" or vr.id.kind == "finite") and vr.ext1_self:
            out.append(f"vertex {v}: finite dimension with a self-extension")
    for c in report.cycle_certificates:
        if not c.cyclically_free:
            continue
        for side in ("pd", "id"):
            sts = [getattr(report.vertices[v], side) for v in c.support]
            if all(s.kind == "finite" for s in sts):
                out.append(f"cycle {c.cycle}: S_e has finite {side} although the cycle is free")
        if c.hh0_witness is False:
            out.append(f"cycle {c.cycle}: free but its class in HH_0(A_e) vanishes")
    if report.gldim.kind == "finite" and not report.radical_trivial:
        out.append("finite global dimension but HH_0 is not radical-trivial")
    for qs in report.quotients:
        if qs.injective_dim_Se is not None and not qs.radical_trivial:
            out.append(f"e = {qs.vertices}: id S_e finite but HH_0(A_e) not radical-trivial")
    return out
