"""Finite-dimensional right modules over a bound quiver algebra.

A module is stored vertex by vertex.  Vectors are rows and arrows act on
the right: the arrow ``a: v -> w`` is a ``dim(v) x dim(w)`` matrix and
``m . a = m @ action[a]``, so paths act left to right like they compose.
"""
from __future__ import annotations

import itertools
import random
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import AlgebraElement, BoundQuiverAlgebra
from .linalg import Subspace, kernel_vectors, rref_rows, solve_rows

Rows = List[list]


# ---------------------------------------------------------------------------
# dense helpers (row-vector convention)


def vecmat(v: Sequence, rows: Sequence[Sequence], ncols: int, zero) -> list:
    out = [zero] * ncols
    for a, r in zip(v, rows):
        if a:
            out = [x + a * y for x, y in zip(out, r)]
    return out


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int, zero) -> Rows:
    return [vecmat(r, b, ncols, zero) for r in a]


def transpose(rows: Sequence[Sequence], ncols: int) -> Rows:
    if not rows:
        return [[] for _ in range(ncols)]
    return [list(c) for c in zip(*rows)]


def identity_rows(n: int, field) -> Rows:
    one, zero = field.one, field.zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zero_rows(m: int, n: int, field) -> Rows:
    zero = field.zero
    return [[zero] * n for _ in range(m)]


def row_rank(rows: Sequence[Sequence], ncols: int, field) -> int:
    return len(rref_rows(rows, ncols, field)[1])


def solve_row_system(rows: Sequence[Sequence], target: Sequence, field):
    """Some ``x`` with ``x @ rows = target``, or None."""
    ncols = len(target)
    return solve_rows(transpose(rows, ncols), list(target), len(rows), field)


def left_kernel(rows: Sequence[Sequence], ncols: int, field) -> Subspace:
    """``{x : x @ rows = 0}`` as a subspace of ``field^len(rows)``."""
    n = len(rows)
    return Subspace(field, n, kernel_vectors(transpose(rows, ncols), n, field))


# ---------------------------------------------------------------------------


class FDModule:
    """Right module given by vertex dimensions and arrow action matrices.

    ``coerce=False`` trusts that the action entries are already field elements.
    """

    def __init__(self, algebra: BoundQuiverAlgebra, dims: Dict, actions: Dict[str, Rows],
                 check: bool = True, name: str = "", coerce: bool = True):
        self.algebra = algebra
        self.field = algebra.field
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        q = algebra.quiver
        self.actions: Dict[str, Rows] = {}
        for a in q.arrows:
            m = actions.get(a.label)
            ds, dt = self.dims[a.source], self.dims[a.target]
            if m is None:
                m = zero_rows(ds, dt, self.field)
            else:
                if coerce:
                    m = [[self.field(x) for x in r] for r in m]
                if len(m) != ds or any(len(r) != dt for r in m):
                    raise ValueError(f"action of {a.label} has the wrong shape")
            self.actions[a.label] = m
        self.name = name
        if check:
            self.check_relations()

    # -- structure ----------------------------------------------------------

    @property
    def vertices(self):
        return self.algebra.vertices

    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def act(self, vec: Sequence, label: str) -> list:
        a = self.algebra.quiver.arrow(label)
        return vecmat(vec, self.actions[label], self.dims[a.target], self.field.zero)

    def act_path(self, vec: Sequence, labels: Sequence[str]) -> list:
        for l in labels:
            vec = self.act(vec, l)
        return vec

    def orbit(self, v, vec: Sequence) -> Dict[int, list]:
        """``vec . b`` for every basis path ``b`` of the algebra starting at ``v``."""
        A = self.algebra
        out = {}
        for k in A.paths_starting(v):
            pre = A.prefix[k]
            if pre is None:
                out[k] = list(vec)
            else:
                out[k] = self.act(out[pre[0]], pre[1])
        return out

    def act_element(self, vec: Sequence, v, x: AlgebraElement) -> Dict:
        """``vec . x`` for ``vec`` at vertex ``v``; returns a dict vertex -> vector."""
        A = self.algebra
        orb = self.orbit(v, vec)
        zero = self.field.zero
        out = {w: [zero] * self.dims[w] for w in self.vertices}
        for k, c in x.coords.items():
            if k in orb:
                w = A.basis[k].target
                out[w] = [a + c * b for a, b in zip(out[w], orb[k])]
        return out

    def check_relations(self):
        A = self.algebra
        for rho in A.relations:
            (a, b), = rho.endpoints()
            for i in range(self.dims[a]):
                vec = [self.field.one if j == i else self.field.zero for j in range(self.dims[a])]
                total = [self.field.zero] * self.dims[b]
                for p, c in rho:
                    img = self.act_path(vec, p.arrows)
                    total = [x + c * y for x, y in zip(total, img)]
                if any(total):
                    raise ValueError(f"relation {rho!r} does not act as zero")
        # paths of the nilpotency degree act as zero too
        n = A.nilpotency_degree
        for v in self.vertices:
            if not self.dims[v]:
                continue
            frontier = {(): identity_rows(self.dims[v], self.field)}
            for _ in range(n):
                nxt = {}
                for word, rows in frontier.items():
                    tgt = A.quiver.arrow(word[-1]).target if word else v
                    for arr in A.quiver.arrows_from(tgt):
                        m = matmul(rows, self.actions[arr.label], self.dims[arr.target],
                                   self.field.zero)
                        if any(any(r) for r in m):
                            nxt[word + (arr.label,)] = m
                frontier = nxt
            if frontier:
                raise ValueError("a path of the nilpotency degree acts non-trivially")

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"FDModule{nm}(dims={self.dim_vector()})"


class ProjectiveSum(tuple):
    """Vertex multiset ``(v_1, ..., v_r)`` standing for ``e_{v_1}A + ... + e_{v_r}A``."""

    def __new__(cls, vertices=()):
        return super().__new__(cls, tuple(vertices))

    def __add__(self, other):
        return ProjectiveSum(tuple(self) + tuple(other))

    def __repr__(self):
        return "ProjectiveSum(" + ", ".join(map(str, self)) + ")"


class ProjectiveModule(FDModule):
    """``e_{v_1}A + ... + e_{v_r}A`` with the normal-path basis in every summand.

    At vertex ``w`` the basis is the pairs ``(j, k)`` with basis path ``k``
    running from ``v_j`` to ``w``, ordered by summand then path.
    """

    def __init__(self, algebra: BoundQuiverAlgebra, summands: Iterable):
        self.summands = ProjectiveSum(summands)
        A = algebra
        self.positions: Dict = {}
        self.coords: Dict = {}
        for w in A.vertices:
            basis = [(j, k) for j, s in enumerate(self.summands) for k in A.peirce_indices(s, w)]
            self.coords[w] = basis
            self.positions[w] = {b: i for i, b in enumerate(basis)}
        dims = {w: len(self.coords[w]) for w in A.vertices}
        actions = {}
        zero = A.field.zero
        for arr in A.quiver.arrows:
            src, tgt = arr.source, arr.target
            pos = self.positions[tgt]
            rows = []
            for (j, k) in self.coords[src]:
                r = [zero] * dims[tgt]
                for k2, c in A._right.get((k, arr.label), {}).items():
                    r[pos[j, k2]] = c
                rows.append(r)
            actions[arr.label] = rows
        super().__init__(A, dims, actions, check=False, coerce=False)

    def generator(self, j: int) -> list:
        """Coordinates of the idempotent generator of summand ``j``."""
        v = self.summands[j]
        vec = [self.field.zero] * self.dims[v]
        vec[self.positions[v][j, self.algebra.index[self.algebra.quiver.trivial(v)]]] = self.field.one
        return vec

    def split(self, w, vec: Sequence) -> List[AlgebraElement]:
        """The components ``(x_j)`` with ``x_j`` in ``e_{v_j} A e_w``."""
        A = self.algebra
        comps = [dict() for _ in self.summands]
        for (j, k), c in zip(self.coords[w], vec):
            if c:
                comps[j][k] = c
        return [AlgebraElement(A, c) for c in comps]

    def join(self, w, comps: Sequence[AlgebraElement]) -> list:
        vec = [self.field.zero] * self.dims[w]
        pos = self.positions[w]
        for j, x in enumerate(comps):
            for k, c in x.coords.items():
                if (j, k) not in pos:
                    raise ValueError("component outside the expected Peirce block")
                vec[pos[j, k]] = c
        return vec


def projective(A: BoundQuiverAlgebra, s) -> ProjectiveModule:
    cache = A.__dict__.setdefault("_projective_cache", {})
    key = tuple(s)
    P = cache.get(key)
    if P is None:
        P = cache[key] = ProjectiveModule(A, key)
    return P


def regular_module(A: BoundQuiverAlgebra) -> ProjectiveModule:
    return projective(A, A.vertices)


def simple(A: BoundQuiverAlgebra, v) -> FDModule:
    if v not in A.quiver.vertex_index:
        raise KeyError(f"unknown vertex {v!r}")
    return FDModule(A, {v: 1}, {}, check=False, name=f"S({v})")


def zero_module(A: BoundQuiverAlgebra) -> FDModule:
    return FDModule(A, {}, {}, check=False, name="0")


def semisimple(A: BoundQuiverAlgebra, vertices) -> FDModule:
    return FDModule(A, {v: 1 for v in vertices}, {}, check=False)


def direct_sum(M: FDModule, N: FDModule) -> FDModule:
    A = M.algebra
    dims = {v: M.dims[v] + N.dims[v] for v in A.vertices}
    actions = {}
    zero = A.field.zero
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        top = [r + [zero] * N.dims[t] for r in M.actions[a.label]]
        bot = [[zero] * M.dims[t] + r for r in N.actions[a.label]]
        actions[a.label] = top + bot
    return FDModule(A, dims, actions, check=False, coerce=False)


# ---------------------------------------------------------------------------
# homomorphisms


class ModuleHom:
    """Per-vertex matrices ``source[v] -> target[v]`` (row vectors on the left)."""

    def __init__(self, source: FDModule, target: FDModule, mats: Dict, check: bool = True):
        self.source = source
        self.target = target
        field = source.field
        self.mats: Dict = {}
        for v in source.vertices:
            m = mats.get(v)
            if m is None:
                m = zero_rows(source.dims[v], target.dims[v], field)
            self.mats[v] = m
        if check:
            if not self.is_homomorphism():
                raise ValueError("matrices do not commute with the arrow actions")

    @classmethod
    def identity(cls, M: FDModule) -> "ModuleHom":
        return cls(M, M, {v: identity_rows(M.dims[v], M.field) for v in M.vertices}, check=False)

    @classmethod
    def zero(cls, M: FDModule, N: FDModule) -> "ModuleHom":
        return cls(M, N, {}, check=False)

    def is_homomorphism(self) -> bool:
        M, N = self.source, self.target
        zero = M.field.zero
        for a in M.algebra.quiver.arrows:
            s, t = a.source, a.target
            lhs = matmul(M.actions[a.label], self.mats[t], N.dims[t], zero)
            rhs = matmul(self.mats[s], N.actions[a.label], N.dims[t], zero)
            if lhs != rhs:
                return False
        return True

    def apply(self, v, vec: Sequence) -> list:
        return vecmat(vec, self.mats[v], self.target.dims[v], self.source.field.zero)

    def then(self, other: "ModuleHom") -> "ModuleHom":
        """``other`` after ``self``."""
        zero = self.source.field.zero
        mats = {v: matmul(self.mats[v], other.mats[v], other.target.dims[v], zero)
                for v in self.source.vertices}
        return ModuleHom(self.source, other.target, mats, check=False)

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        mats = {v: [[x + y for x, y in zip(r, s)] for r, s in zip(self.mats[v], other.mats[v])]
                for v in self.source.vertices}
        return ModuleHom(self.source, self.target, mats, check=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ModuleHom":
        c = self.source.field(c)
        mats = {v: [[c * x for x in r] for r in m] for v, m in self.mats.items()}
        return ModuleHom(self.source, self.target, mats, check=False)

    def is_zero(self) -> bool:
        return not any(any(r) for m in self.mats.values() for r in m)

    def kernel(self) -> Dict:
        return {v: left_kernel(self.mats[v], self.target.dims[v], self.source.field)
                for v in self.source.vertices}

    def image(self) -> Dict:
        return {v: Subspace(self.source.field, self.target.dims[v], self.mats[v])
                for v in self.source.vertices}

    def rank(self) -> Dict:
        return {v: row_rank(self.mats[v], self.target.dims[v], self.source.field)
                for v in self.source.vertices}

    def is_injective(self) -> bool:
        r = self.rank()
        return all(r[v] == self.source.dims[v] for v in self.source.vertices)

    def is_surjective(self) -> bool:
        r = self.rank()
        return all(r[v] == self.target.dims[v] for v in self.source.vertices)

    def is_iso(self) -> bool:
        return (self.source.dim_vector() == self.target.dim_vector()
                and self.is_injective())

    def inverse(self) -> "ModuleHom":
        if not self.is_iso():
            raise ValueError("map is not invertible")
        field = self.source.field
        mats = {v: [solve_row_system(self.mats[v], r, field)
                    for r in identity_rows(self.target.dims[v], field)]
                for v in self.source.vertices}
        return ModuleHom(self.target, self.source, mats, check=False)

    def __eq__(self, other):
        if not isinstance(other, ModuleHom):
            return NotImplemented
        return self.mats == other.mats

    def __repr__(self):
        return f"ModuleHom({self.source!r} -> {self.target!r})"


# ---------------------------------------------------------------------------
# sub- and quotient modules


def submodule_from_subspaces(M: FDModule, subs: Dict) -> Tuple[FDModule, ModuleHom]:
    """Submodule with the given (action-closed) per-vertex subspaces and its inclusion."""
    A = M.algebra
    dims = {v: subs[v].dim for v in A.vertices}
    actions = {}
    zero = M.field.zero
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        rows = []
        for r in subs[s].basis:
            img = vecmat(r, M.actions[a.label], M.dims[t], zero)
            coords = subs[t].coordinates(img)
            if coords is None:
                raise ValueError("subspaces are not closed under the action")
            rows.append(coords)
        actions[a.label] = rows
    sub = FDModule(A, dims, actions, check=False, coerce=False)
    incl = ModuleHom(sub, M, {v: [list(r) for r in subs[v].basis] for v in A.vertices},
                     check=False)
    return sub, incl


def generated_subspaces(M: FDModule, gens: Iterable[Tuple[object, Sequence]]) -> Dict:
    """Per-vertex spans of the submodule generated by ``(vertex, vector)`` pairs."""
    A = M.algebra
    vecs = {v: [] for v in A.vertices}
    for v, g in gens:
        for k, img in M.orbit(v, g).items():
            vecs[A.basis[k].target].append(img)
    return {v: Subspace(M.field, M.dims[v], vecs[v]) for v in A.vertices}


def submodule(M: FDModule, gens) -> Tuple[FDModule, ModuleHom]:
    """Submodule generated by ``(vertex, vector)`` pairs and its inclusion."""
    return submodule_from_subspaces(M, generated_subspaces(M, gens))


def quotient(M: FDModule, subs: Dict) -> Tuple[FDModule, ModuleHom]:
    """``M / U`` for action-closed subspaces ``U``; returns the module and projection."""
    A = M.algebra
    field = M.field
    comp = {v: subs[v].complement() for v in A.vertices}
    dims = {v: len(comp[v]) for v in A.vertices}

    def proj(v, vec):
        red = subs[v].reduce(vec)
        return [red[c] for c in comp[v]]

    actions = {}
    zero = field.zero
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        rows = []
        for c in comp[s]:
            img = M.actions[a.label][c]
            rows.append(proj(t, img))
        actions[a.label] = rows
    Q = FDModule(A, dims, actions, check=False, coerce=False)
    mats = {}
    for v in A.vertices:
        n = M.dims[v]
        mats[v] = [proj(v, [field.one if i == j else zero for j in range(n)]) for i in range(n)]
    return Q, ModuleHom(M, Q, mats, check=False)


def restrict_hom(f: ModuleHom, src_incl: ModuleHom, tgt_incl: ModuleHom) -> ModuleHom:
    """The map between submodules induced by ``f`` (which must preserve them)."""
    S, T = src_incl.source, tgt_incl.source
    mats = {}
    for v in S.vertices:
        tsub = Subspace(T.field, f.target.dims[v], tgt_incl.mats[v], list(_pivots(tgt_incl.mats[v])))
        rows = []
        for r in src_incl.mats[v]:
            img = f.apply(v, r)
            coords = tsub.coordinates(img)
            if coords is None:
                raise ValueError("map does not preserve the submodules")
            rows.append(coords)
        mats[v] = rows
    return ModuleHom(S, T, mats, check=False)


def _pivots(rows):
    """Pivot columns of rows already in reduced echelon form."""
    for r in rows:
        for c, x in enumerate(r):
            if x:
                yield c
                break


def induced_on_quotient(f: ModuleHom, p_src: ModuleHom, p_tgt: ModuleHom) -> ModuleHom:
    """Map between quotients induced by ``f``; ``p_*`` are the projections from :func:`quotient`."""
    Q1, Q2 = p_src.target, p_tgt.target
    mats = {}
    for v in Q1.vertices:
        # a preimage of the i-th basis vector of Q1[v] is a unit vector of the
        # source at the i-th complement coordinate
        n = f.source.dims[v]
        rows = []
        for i in range(Q1.dims[v]):
            pre = solve_row_system(p_src.mats[v], [Q1.field.one if j == i else Q1.field.zero
                                                   for j in range(Q1.dims[v])], Q1.field)
            rows.append(p_tgt.apply(v, f.apply(v, pre)))
        mats[v] = rows
    return ModuleHom(Q1, Q2, mats, check=False)


def right_ideal(A: BoundQuiverAlgebra, generators: Iterable[AlgebraElement]) -> Tuple[FDModule, ModuleHom]:
    """The right ideal generated by ``generators`` inside the regular module."""
    R = regular_module(A)
    gens = []
    for x in generators:
        for w in A.vertices:
            # x e_w lives in the component of R at w, i.e. summand (vertex of
            # the path's source) with that path
            vec = [A.field.zero] * R.dims[w]
            any_term = False
            for k, c in x.coords.items():
                p = A.basis[k]
                if p.target == w:
                    j = A.quiver.vertex_index[p.source]
                    vec[R.positions[w][j, k]] = c
                    any_term = True
            if any_term:
                gens.append((w, vec))
    return submodule(R, gens)


def element_to_regular(A: BoundQuiverAlgebra, x: AlgebraElement) -> Dict:
    R = regular_module(A)
    out = {}
    for w in A.vertices:
        vec = [A.field.zero] * R.dims[w]
        for k, c in x.coords.items():
            p = A.basis[k]
            if p.target == w:
                vec[R.positions[w][A.quiver.vertex_index[p.source], k]] = c
        out[w] = vec
    return out


def left_multiplication(A: BoundQuiverAlgebra, a: AlgebraElement) -> ModuleHom:
    """``x -> a x`` as an endomorphism of the regular right module."""
    R = regular_module(A)
    mats = {}
    for w in A.vertices:
        rows = []
        for (j, k) in R.coords[w]:
            prod = a * A.basis_element(k)
            rows.append(element_to_regular(A, prod)[w])
        mats[w] = rows
    return ModuleHom(R, R, mats, check=False)


# ---------------------------------------------------------------------------
# tops and covers


def radical_subspaces(M: FDModule, subs: Optional[Dict] = None) -> Dict:
    """``M J`` (or ``U J`` for action-closed subspaces ``U`` of ``M``) per vertex."""
    A = M.algebra
    zero = M.field.zero
    vecs = {v: [] for v in A.vertices}
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        src_rows = subs[s].basis if subs is not None else identity_rows(M.dims[s], M.field)
        for r in src_rows:
            img = vecmat(r, M.actions[a.label], M.dims[t], zero)
            if any(img):
                vecs[t].append(img)
    return {v: Subspace(M.field, M.dims[v], vecs[v]) for v in A.vertices}


def top(M: FDModule) -> Dict:
    """Vertex multiplicities of ``M / M J``."""
    rad = radical_subspaces(M)
    return {v: M.dims[v] - rad[v].dim for v in M.vertices}


def top_generators(M: FDModule, subs: Optional[Dict] = None) -> List[Tuple[object, list]]:
    """Vectors whose classes form a basis of the top, vertex by vertex.

    Without ``subs`` these are unit vectors of ``M`` at the non-pivot
    coordinates of ``MJ``.  With ``subs`` (action-closed subspaces ``U``)
    they are the first basis rows of ``U`` independent modulo ``UJ``.
    """
    A = M.algebra
    rad = radical_subspaces(M, subs)
    gens = []
    for v in A.vertices:
        if subs is None:
            n = M.dims[v]
            for c in rad[v].complement():
                vec = [M.field.zero] * n
                vec[c] = M.field.one
                gens.append((v, vec))
        else:
            span = list(rad[v].basis)
            current = Subspace(M.field, M.dims[v], span, list(rad[v].pivots))
            for r in subs[v].basis:
                if not current.contains(r):
                    gens.append((v, list(r)))
                    span.append(r)
                    current = Subspace(M.field, M.dims[v], span)
    return gens


def cover_map(P: ProjectiveModule, M: FDModule, gens: Sequence[Tuple[object, Sequence]]) -> ModuleHom:
    """The map ``P -> M`` sending the generator of summand ``j`` to ``gens[j]``."""
    A = M.algebra
    orbits = [M.orbit(v, g) for v, g in gens]
    mats = {}
    for w in A.vertices:
        mats[w] = [orbits[j][k] for (j, k) in P.coords[w]]
    return ModuleHom(P, M, mats, check=False)


def projective_cover(M: FDModule) -> Tuple[ProjectiveSum, ModuleHom]:
    """Minimal projective cover ``(multiset, surjection)`` of a non-zero module."""
    if M.is_zero():
        raise ValueError("the zero module has no non-trivial projective cover")
    gens = top_generators(M)
    P = projective(M.algebra, [v for v, _ in gens])
    return P.summands, cover_map(P, M, gens)


def syzygy(M: FDModule) -> Tuple[FDModule, ModuleHom]:
    """The kernel of the projective cover of ``M`` and its inclusion."""
    if M.is_zero():
        return zero_module(M.algebra), ModuleHom.zero(zero_module(M.algebra), M)
    _, pi = projective_cover(M)
    return submodule_from_subspaces(pi.source, pi.kernel())


# ---------------------------------------------------------------------------
# Hom spaces and isomorphism search


def hom_space(M: FDModule, N: FDModule) -> List[ModuleHom]:
    """A basis of ``Hom(M, N)``."""
    A = M.algebra
    field = M.field
    zero = field.zero
    offsets = {}
    nvars = 0
    for v in A.vertices:
        offsets[v] = nvars
        nvars += M.dims[v] * N.dims[v]

    def var(v, r, c):
        return offsets[v] + r * N.dims[v] + c

    eqs = []
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        AM, AN = M.actions[a.label], N.actions[a.label]
        # (AM X_t - X_s AN)[r][c] = 0
        for r in range(M.dims[s]):
            for c in range(N.dims[t]):
                row = [zero] * nvars
                for k in range(M.dims[t]):
                    x = AM[r][k]
                    if x:
                        row[var(t, k, c)] += x
                for k in range(N.dims[s]):
                    x = AN[k][c]
                    if x:
                        row[var(s, r, k)] -= x
                if any(row):
                    eqs.append(row)
    sols = kernel_vectors(eqs, nvars, field) if nvars else []
    out = []
    for x in sols:
        mats = {}
        for v in A.vertices:
            o = offsets[v]
            mats[v] = [x[o + r * N.dims[v]: o + (r + 1) * N.dims[v]] for r in range(M.dims[v])]
        out.append(ModuleHom(M, N, mats, check=False))
    return out


def _combine(homs: Sequence[ModuleHom], coeffs) -> ModuleHom:
    out = homs[0].scale(coeffs[0])
    for h, c in zip(homs[1:], coeffs[1:]):
        if c:
            out = out + h.scale(c)
    return out


def iso_test(M: FDModule, N: FDModule, seed: int = 0, tries: int = 40) -> Optional[ModuleHom]:
    """Search ``Hom(M, N)`` for an isomorphism; any map returned is verified.

    None is conclusive only when the dimension vectors differ.
    """
    if M.dim_vector() != N.dim_vector():
        return None
    if M.is_zero():
        return ModuleHom.zero(M, N)
    H = hom_space(M, N)
    if not H:
        return None
    for h in H:
        if h.is_iso():
            return h
    field = M.field
    k = len(H)
    if field.is_prime and k <= 2:
        for coeffs in itertools.product(range(field.p), repeat=k):
            if any(coeffs):
                h = _combine(H, coeffs)
                if h.is_iso():
                    return h
        return None
    h = _combine(H, [1] * k)
    if h.is_iso():
        return h
    rng = random.Random(seed)
    lo, hi = (0, field.p - 1) if field.is_prime else (-5, 5)
    for _ in range(tries):
        coeffs = [rng.randint(lo, hi) for _ in range(k)]
        if not any(coeffs):
            continue
        h = _combine(H, coeffs)
        if h.is_iso():
            return h
    return None


# ---------------------------------------------------------------------------
# maps between projectives as matrices over the algebra


class LambdaMatrix:
    """A map ``P -> P'`` between sums of indecomposable projectives.

    ``entries[i][j]`` lies in ``e_{target_i} A e_{source_j}``: the generator
    of source summand ``j`` goes to the element whose ``i``-th component is
    ``entries[i][j]``, and an element ``(x_j)`` goes to ``(sum_j entries[i][j] x_j)``.
    """

    def __init__(self, algebra: BoundQuiverAlgebra, source, target, entries, check: bool = True):
        self.algebra = algebra
        self.source = ProjectiveSum(source)
        self.target = ProjectiveSum(target)
        self.entries: List[List[AlgebraElement]] = [list(r) for r in entries]
        if len(self.entries) != len(self.target) or any(len(r) != len(self.source)
                                                        for r in self.entries):
            raise ValueError("entry grid does not match the summand counts")
        if check:
            self.check_peirce()

    def check_peirce(self):
        A = self.algebra
        for i, t in enumerate(self.target):
            for j, s in enumerate(self.source):
                x = self.entries[i][j]
                if x.algebra is not A:
                    raise ValueError("entry from another algebra")
                for k in x.coords:
                    p = A.basis[k]
                    if p.source != t or p.target != s:
                        raise ValueError(f"entry ({i},{j}) has a term {p} outside e_{t} A e_{s}")

    @classmethod
    def identity(cls, A: BoundQuiverAlgebra, s) -> "LambdaMatrix":
        s = ProjectiveSum(s)
        ents = [[A.trivial(s[i]) if i == j else A.zero() for j in range(len(s))]
                for i in range(len(s))]
        return cls(A, s, s, ents, check=False)

    @classmethod
    def zero(cls, A: BoundQuiverAlgebra, source, target) -> "LambdaMatrix":
        return cls(A, source, target, [[A.zero() for _ in source] for _ in target], check=False)

    @property
    def shape(self):
        return (len(self.target), len(self.source))

    def is_square(self) -> bool:
        return self.source == self.target

    def __matmul__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        """``self`` after ``other``."""
        if other.target != self.source:
            raise ValueError("incompatible projective sums")
        A = self.algebra
        ents = []
        for i in range(len(self.target)):
            row = []
            for k in range(len(other.source)):
                acc = A.zero()
                for j in range(len(self.source)):
                    a, b = self.entries[i][j], other.entries[j][k]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            ents.append(row)
        return LambdaMatrix(A, other.source, self.target, ents, check=False)

    def __add__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("shape mismatch")
        ents = [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        return LambdaMatrix(self.algebra, self.source, self.target, ents, check=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LambdaMatrix":
        ents = [[x.scale(c) for x in r] for r in self.entries]
        return LambdaMatrix(self.algebra, self.source, self.target, ents, check=False)

    def column(self, j: int) -> List[AlgebraElement]:
        return [r[j] for r in self.entries]

    def in_radical(self) -> bool:
        return all(x.in_radical() for r in self.entries for x in r)

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> "LambdaMatrix":
        ents = [[self.entries[i][j] for j in cols] for i in rows]
        return LambdaMatrix(self.algebra, [self.source[j] for j in cols],
                            [self.target[i] for i in rows], ents, check=False)

    @classmethod
    def from_columns(cls, A, source, target, columns) -> "LambdaMatrix":
        ents = [[columns[j][i] for j in range(len(source))] for i in range(len(target))]
        return cls(A, source, target, ents, check=False)

    @classmethod
    def blocks(cls, grid) -> "LambdaMatrix":
        """Assemble a block matrix from a grid of LambdaMatrices."""
        A = grid[0][0].algebra
        target = ProjectiveSum()
        for row in grid:
            target = target + row[0].target
        source = ProjectiveSum()
        for m in grid[0]:
            source = source + m.source
        ents = []
        for row in grid:
            for i in range(len(row[0].target)):
                ents.append([x for m in row for x in m.entries[i]])
        return cls(A, source, target, ents, check=False)

    def to_hom(self) -> ModuleHom:
        """The concrete module map ``projective(source) -> projective(target)``."""
        A = self.algebra
        P, Q = projective(A, self.source), projective(A, self.target)
        zero = A.field.zero
        mats = {}
        for w in A.vertices:
            pos = Q.positions[w]
            rows = []
            for (j, k) in P.coords[w]:
                r = [zero] * Q.dims[w]
                for i in range(len(self.target)):
                    x = self.entries[i][j]
                    for a, c in x.coords.items():
                        for k2, d in A.basis_product(a, k).items():
                            r[pos[i, k2]] += c * d
                rows.append(r)
            mats[w] = rows
        return ModuleHom(P, Q, mats, check=False)

    @classmethod
    def from_hom(cls, f: ModuleHom) -> "LambdaMatrix":
        P, Q = f.source, f.target
        if not isinstance(P, ProjectiveModule) or not isinstance(Q, ProjectiveModule):
            raise ValueError("both ends must be projective modules")
        A = P.algebra
        cols = []
        for j, v in enumerate(P.summands):
            img = f.apply(v, P.generator(j))
            cols.append(Q.split(v, img))
        return cls.from_columns(A, P.summands, Q.summands, cols)

    def __eq__(self, other):
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.entries == other.entries)

    def __repr__(self):
        return f"LambdaMatrix({self.source!r} -> {self.target!r})"
