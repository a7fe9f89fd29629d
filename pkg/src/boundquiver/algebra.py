"""Bound quiver algebras ``kQ/I`` compiled to a normal-path basis.

The ideal generated by the relations is spanned, degree by degree, by the
elements ``u * rho * v`` (``u``, ``v`` paths).  Each ``(source, target)``
block of that span is kept fully reduced with the *largest* path (under
length-lex order) of every row as its leading term.  The paths that are
never leading terms are the normal paths; they form the basis of the
algebra and every other path reduces to a combination of smaller ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence

from .errors import FieldMismatch, MalformedRelation, NotAdmissible
from .linalg import QQ, Field, Subspace, kernel_vectors, rref_rows
from .quiver import Path, PathVector, Quiver, compose, paths_from

DEFAULT_CAP = 30


class _PathEchelon:
    """Fully reduced sparse echelon basis over path coordinates.

    ``rows`` maps leading path -> row (dict path -> coeff, leading coeff 1).
    No row contains the leading path of another row.  ``occ`` maps a
    non-leading path to the leads of the rows containing it.
    """

    def __init__(self, key):
        self.key = key
        self.rows: Dict[Path, Dict[Path, object]] = {}
        self.occ: Dict[Path, set] = {}

    def reduce(self, vec: Dict[Path, object]) -> Dict[Path, object]:
        vec = dict(vec)
        for lead in [p for p in vec if p in self.rows]:
            f = vec.get(lead)
            if not f:
                continue
            for p, c in self.rows[lead].items():
                x = vec.get(p, 0) - f * c
                if x:
                    vec[p] = x
                else:
                    vec.pop(p, None)
        return vec

    def insert(self, vec: Dict[Path, object]) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        lead = max(vec, key=self.key)
        inv = 1 / vec[lead]
        vec = {p: c * inv for p, c in vec.items()}
        occ = self.occ
        for olead in occ.pop(lead, ()):
            other = self.rows[olead]
            f = other[lead]
            for p, c in vec.items():
                x = other.get(p, 0) - f * c
                if x:
                    if p not in other:
                        occ.setdefault(p, set()).add(olead)
                    other[p] = x
                elif p in other:
                    del other[p]
                    if p != lead:
                        occ[p].discard(olead)
        self.rows[lead] = vec
        for p in vec:
            if p != lead:
                occ.setdefault(p, set()).add(lead)
        return True

    def contains_path(self, p: Path) -> bool:
        row = self.rows.get(p)
        return row is not None and len(row) == 1


class _PathIndex:
    """Paths grouped by (vertex, length), grown on demand."""

    def __init__(self, quiver: Quiver):
        self.q = quiver
        self._out = {v: [[Path(v, v, ())]] for v in quiver.vertices}
        self._in = {v: [[Path(v, v, ())]] for v in quiver.vertices}

    def starting(self, v, k) -> List[Path]:
        levels = self._out[v]
        while len(levels) <= k:
            levels.append([Path(p.source, a.target, p.arrows + (a.label,))
                           for p in levels[-1] for a in self.q.arrows_from(p.target)])
        return levels[k]

    def ending(self, v, k) -> List[Path]:
        levels = self._in[v]
        while len(levels) <= k:
            levels.append([Path(a.source, p.target, (a.label,) + p.arrows)
                           for p in levels[-1] for a in self.q.arrows_into(p.source)])
        return levels[k]

    def of_length(self, k) -> List[Path]:
        return [p for v in self.q.vertices for p in self.starting(v, k)]


def _validate_relations(quiver: Quiver, relations, field: Field):
    out = []
    for rho in relations:
        if not isinstance(rho, PathVector):
            raise MalformedRelation(f"relation {rho!r} is not a PathVector")
        if rho.field is not field:
            raise FieldMismatch("relation over a different field")
        if not rho:
            continue
        ends = rho.endpoints()
        if len(ends) != 1:
            raise MalformedRelation(f"relation {rho!r} mixes endpoints {sorted(map(str, ends))}")
        for p in rho.paths():
            if p.length < 2:
                raise MalformedRelation(f"relation {rho!r} has a term {p} of length < 2")
            try:
                check = quiver.path(p.arrows)
            except (KeyError, ValueError) as exc:
                raise MalformedRelation(f"relation term {p}: {exc}") from None
            if (check.source, check.target) != (p.source, p.target):
                raise MalformedRelation(f"relation term {p} has wrong endpoints")
        out.append(rho)
    return out


def _ideal_generators(pidx: _PathIndex, rho: PathVector, extra: int):
    """Yield (u, v) pairs with |u| + |v| == extra around ``rho``."""
    (a, b), = rho.endpoints()
    for k in range(extra + 1):
        for u in pidx.ending(a, k):
            for v in pidx.starting(b, extra - k):
                yield u, v


class BoundQuiverAlgebra:
    """A finite-dimensional algebra ``kQ/I`` with ``I`` admissible.

    Use :func:`build_algebra` to construct one.  Basis elements are the
    normal paths, indexed in length-lex order (trivial paths first).
    """

    def __init__(self, quiver, relations, field, nilpotency_degree, basis, blocks, cap):
        self.quiver: Quiver = quiver
        self.relations: List[PathVector] = list(relations)
        self.field: Field = field
        self.nilpotency_degree: int = nilpotency_degree
        self.basis: List[Path] = basis
        self.index: Dict[Path, int] = {p: i for i, p in enumerate(basis)}
        self.cap = cap
        self._blocks: Dict[tuple, _PathEchelon] = blocks
        self._reduce_cache: Dict[Path, Dict[int, object]] = {}
        self._mul_cache: Dict[tuple, Dict[int, object]] = {}
        self._right = self._right_arrow_table()

    # -- basic data ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self):
        return self.quiver.vertices

    def __repr__(self):
        return (f"BoundQuiverAlgebra(dim={self.dim}, n={self.nilpotency_degree}, "
                f"vertices={len(self.vertices)}, field={self.field.tag})")

    # -- reduction ------------------------------------------------------------

    def _reduce_path_coords(self, p: Path) -> Dict[int, object]:
        if p.length >= self.nilpotency_degree:
            return {}
        cached = self._reduce_cache.get(p)
        if cached is not None:
            return cached
        i = self.index.get(p)
        if i is not None:
            out = {i: self.field.one}
        else:
            block = self._blocks.get((p.source, p.target))
            row = block.rows.get(p) if block is not None else None
            if row is None:
                raise AssertionError(f"path {p} is neither normal nor a leading term")
            out = {self.index[q]: -c for q, c in row.items() if q != p}
        self._reduce_cache[p] = out
        return out

    def reduce(self, p: Path) -> "AlgebraElement":
        """The class of the path ``p`` in the algebra."""
        if p.length > self.nilpotency_degree:
            return self.zero()
        return AlgebraElement(self, self._reduce_path_coords(p))

    def reduce_vector(self, v: PathVector) -> "AlgebraElement":
        out = {}
        for p, c in v:
            for i, x in self._reduce_path_coords(p).items():
                y = out.get(i, 0) + c * x
                if y:
                    out[i] = y
                else:
                    out.pop(i, None)
        return AlgebraElement(self, out)

    def _right_arrow_table(self):
        table = {}
        n = self.nilpotency_degree
        for i, b in enumerate(self.basis):
            for a in self.quiver.arrows_from(b.target):
                if b.length + 1 >= n:
                    table[i, a.label] = {}
                else:
                    table[i, a.label] = self._reduce_path_coords(
                        Path(b.source, a.target, b.arrows + (a.label,)))
        return table

    def _times_arrow(self, coords: Dict[int, object], label: str) -> Dict[int, object]:
        out = {}
        for i, c in coords.items():
            prod = self._right.get((i, label))
            if prod is None:
                continue
            for k, x in prod.items():
                y = out.get(k, 0) + c * x
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
        return out

    def basis_product(self, i: int, j: int) -> Dict[int, object]:
        """Coordinates of ``basis[i] * basis[j]``."""
        key = (i, j)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        bi, bj = self.basis[i], self.basis[j]
        if bi.target != bj.source:
            out = {}
        else:
            out = {i: self.field.one}
            for label in bj.arrows:
                out = self._times_arrow(out, label)
                if not out:
                    break
        self._mul_cache[key] = out
        return out

    # -- elements ---------------------------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {self.index[self.quiver.trivial(v)]: self.field.one
                                     for v in self.vertices})

    def trivial(self, v) -> "AlgebraElement":
        return AlgebraElement(self, {self.index[self.quiver.trivial(v)]: self.field.one})

    def idempotent(self, vertices) -> "AlgebraElement":
        return AlgebraElement(self, {self.index[self.quiver.trivial(v)]: self.field.one
                                     for v in vertices})

    def arrow(self, label: str) -> "AlgebraElement":
        a = self.quiver.arrow(label)
        return self.reduce(Path(a.source, a.target, (label,)))

    def path(self, *labels: str) -> "AlgebraElement":
        return self.reduce(self.quiver.path(labels))

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: self.field.one})

    def element(self, coords) -> "AlgebraElement":
        """Element from a dense coordinate vector or a dict index -> scalar."""
        if isinstance(coords, dict):
            items = coords.items()
        else:
            if len(coords) != self.dim:
                raise ValueError("coordinate vector has the wrong length")
            items = enumerate(coords)
        return AlgebraElement(self, {i: self.field(c) for i, c in items if c})

    def multiply(self, x: "AlgebraElement", y: "AlgebraElement") -> "AlgebraElement":
        return x * y

    # -- structure ------------------------------------------------------------------

    def radical_basis(self) -> List[Path]:
        return [p for p in self.basis if p.length >= 1]

    def radical_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.basis) if p.length >= 1]

    def peirce(self, i, j) -> List[Path]:
        """Basis paths from vertex ``i`` to vertex ``j``."""
        return [p for p in self.basis if p.source == i and p.target == j]

    def peirce_indices(self, i, j) -> List[int]:
        return self._peirce_idx.get((i, j), [])

    @cached_property
    def _peirce_idx(self):
        out: Dict[tuple, List[int]] = {}
        for k, p in enumerate(self.basis):
            out.setdefault((p.source, p.target), []).append(k)
        return out

    @cached_property
    def prefix(self) -> List:
        """For each basis path: (index of the path minus its last arrow, last label)."""
        out = []
        for p in self.basis:
            if not p.arrows:
                out.append(None)
            else:
                mid = self.quiver.arrow(p.arrows[-1]).source
                out.append((self.index[Path(p.source, mid, p.arrows[:-1])], p.arrows[-1]))
        return out

    def paths_starting(self, v) -> List[int]:
        return self._by_end[0].get(v, [])

    def paths_ending(self, v) -> List[int]:
        return self._by_end[1].get(v, [])

    @cached_property
    def _by_end(self):
        starting: Dict = {}
        ending: Dict = {}
        for k, p in enumerate(self.basis):
            starting.setdefault(p.source, []).append(k)
            ending.setdefault(p.target, []).append(k)
        return starting, ending

    def ideal_block(self, a, b) -> Dict[Path, Dict[Path, object]]:
        """Fully reduced rows spanning ``e_a I e_b`` truncated below the nilpotency degree."""
        block = self._blocks.get((a, b))
        if block is None:
            return {}
        n = self.nilpotency_degree
        return {lead: row for lead, row in block.rows.items() if lead.length < n}

    def in_ideal(self, v: PathVector) -> bool:
        """Whether a path combination lies in ``I``."""
        return self.reduce_vector(v).is_zero()

    @cached_property
    def opposite_algebra(self) -> "BoundQuiverAlgebra":
        return build_algebra(self.quiver.opposite(), [r.reversed() for r in self.relations],
                             cap=self.cap, field=self.field)

    def opposite(self) -> "BoundQuiverAlgebra":
        return self.opposite_algebra


class AlgebraElement:
    """Element of a :class:`BoundQuiverAlgebra` as sparse basis coordinates."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: BoundQuiverAlgebra, coords: Dict[int, object]):
        self.algebra = algebra
        self.coords = {i: c for i, c in coords.items() if c}

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for i, c in other.coords.items():
            out[i] = out.get(i, 0) + c
        return AlgebraElement(self.algebra, out)

    def __neg__(self):
        return AlgebraElement(self.algebra, {i: -c for i, c in self.coords.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "AlgebraElement":
        s = self.algebra.field(s)
        return AlgebraElement(self.algebra, {i: s * c for i, c in self.coords.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._check(other)
        A = self.algebra
        out = {}
        for i, c in self.coords.items():
            for j, d in other.coords.items():
                prod = A.basis_product(i, j)
                if not prod:
                    continue
                cd = c * d
                for k, x in prod.items():
                    out[k] = out.get(k, 0) + cd * x
        return AlgebraElement(A, out)

    def __rmul__(self, s):
        return self.scale(s)

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.coords

    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def vector(self) -> list:
        zero = self.algebra.field.zero
        v = [zero] * self.algebra.dim
        for i, c in self.coords.items():
            v[i] = c
        return v

    def terms(self):
        """(path, coefficient) pairs in basis order."""
        return [(self.algebra.basis[i], self.coords[i]) for i in sorted(self.coords)]

    def in_radical(self) -> bool:
        return all(self.algebra.basis[i].length >= 1 for i in self.coords)

    def __repr__(self):
        if not self.coords:
            return "0"
        return " + ".join(f"{c}*{p}" for p, c in self.terms())


def build_algebra(quiver: Quiver, relations: Iterable[PathVector], cap: int = DEFAULT_CAP,
                  field: Optional[Field] = None) -> BoundQuiverAlgebra:
    """Compile ``(quiver, relations)`` into a bound quiver algebra.

    Parameters
    ----------
    quiver : Quiver
    relations : iterable of PathVector
        Each relation is a combination of paths of length >= 2 sharing one
        source and one target.
    cap : int
        Largest nilpotency degree searched for.
    field : Field, optional
        Defaults to the relations' field, or the rationals.

    Raises
    ------
    MalformedRelation
        A relation mixes endpoints or has a term of length < 2.
    NotAdmissible
        No ``n <= cap`` has every path of length ``n`` inside the ideal.
    """
    relations = list(relations)
    if field is None:
        field = relations[0].field if relations else QQ
    relations = _validate_relations(quiver, relations, field)
    key = quiver.path_key
    pidx = _PathIndex(quiver)

    def block(blocks, a, b):
        e = blocks.get((a, b))
        if e is None:
            e = blocks[a, b] = _PathEchelon(key)
        return e

    # Stage 1: certify some N with every length-N path in the ideal, using
    # generators u*rho*v whose longest term has length <= D.
    blocks: Dict[tuple, _PathEchelon] = {}
    certified = None
    for D in range(1, cap + 1):
        for rho in relations:
            extra = D - rho.max_length()
            if extra < 0:
                continue
            for u, v in _ideal_generators(pidx, rho, extra):
                g = rho.multiply(u, v)
                block(blocks, u.source, v.target).insert(g.terms)
        for n in range(1, D + 1):
            if all(blocks.get((p.source, p.target)) is not None
                   and blocks[p.source, p.target].contains_path(p)
                   for p in pidx.of_length(n)):
                certified = n
                break
        if certified is not None:
            break
    if certified is None:
        raise NotAdmissible(cap)

    # Stage 2: with every path of length >= N in I, the ideal below length N
    # is spanned by the truncations of all u*rho*v having a term shorter than N.
    N = certified
    blocks = {}
    for rho in relations:
        lo = rho.min_length()
        for extra in range(0, N - lo):
            for u, v in _ideal_generators(pidx, rho, extra):
                g = rho.multiply(u, v)
                trunc = {p: c for p, c in g.terms.items() if p.length < N}
                if trunc:
                    block(blocks, u.source, v.target).insert(trunc)
    n = N
    for m in range(1, N):
        if all(blocks.get((p.source, p.target)) is not None
               and blocks[p.source, p.target].contains_path(p)
               for p in pidx.of_length(m)):
            n = m
            break

    basis = []
    for length in range(n):
        for p in sorted(pidx.of_length(length), key=key):
            e = blocks.get((p.source, p.target))
            if e is None or p not in e.rows:
                basis.append(p)
    basis.sort(key=key)
    return BoundQuiverAlgebra(quiver, relations, field, n, basis, blocks, cap)


# ---------------------------------------------------------------------------
# idempotents and the quotient by the ideal generated by 1 - e


@dataclass(frozen=True)
class Idempotent:
    """Sum of the trivial paths at ``vertices`` (empty set = zero idempotent)."""

    vertices: frozenset

    def __init__(self, vertices=()):
        object.__setattr__(self, "vertices", frozenset(vertices))

    def complement(self, algebra: BoundQuiverAlgebra) -> "Idempotent":
        return Idempotent(v for v in algebra.vertices if v not in self.vertices)

    def __contains__(self, v):
        return v in self.vertices

    def sorted(self, algebra: BoundQuiverAlgebra) -> list:
        return [v for v in algebra.vertices if v in self.vertices]


def as_idempotent(e) -> Idempotent:
    return e if isinstance(e, Idempotent) else Idempotent(e)


class QuotientAlgebra:
    """``parent / parent (1 - e) parent`` together with a quiver presentation.

    ``algebra`` presents the quotient as a bound quiver algebra on the full
    subquiver with vertex set ``e``; :meth:`project` is the canonical
    surjection expressed in that presentation's basis.
    """

    def __init__(self, parent: BoundQuiverAlgebra, e: Idempotent, killed: Subspace,
                 algebra: BoundQuiverAlgebra):
        self.parent = parent
        self.idempotent = e
        self.killed_ideal = killed
        self.algebra = algebra
        self._proj: Dict[int, Dict[int, object]] = {}
        for i, p in enumerate(parent.basis):
            if self._survives(p):
                sub = algebra.quiver.path(p.arrows) if p.arrows else algebra.quiver.trivial(p.source)
                self._proj[i] = algebra.reduce(sub).coords
            else:
                self._proj[i] = {}

    def _survives(self, p: Path) -> bool:
        q = self.parent.quiver
        if p.source not in self.idempotent:
            return False
        return all(q.arrow(l).target in self.idempotent for l in p.arrows)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def basis(self) -> List[Path]:
        return self.algebra.basis

    def project(self, x: AlgebraElement) -> AlgebraElement:
        if x.algebra is not self.parent:
            raise ValueError("element of another algebra")
        out = {}
        for i, c in x.coords.items():
            for k, y in self._proj[i].items():
                out[k] = out.get(k, 0) + c * y
        return AlgebraElement(self.algebra, out)

    def __repr__(self):
        return f"QuotientAlgebra(dim={self.dim}, e={sorted(map(str, self.idempotent.vertices))})"


def killed_ideal(A: BoundQuiverAlgebra, e: Idempotent) -> Subspace:
    """Span of ``A (1 - e) A`` in basis coordinates."""
    vecs = []
    outside = [v for v in A.vertices if v not in e.vertices]
    for v in outside:
        ending = A.paths_ending(v)
        starting = A.paths_starting(v)
        for i in ending:
            for j in starting:
                prod = A.basis_product(i, j)
                if prod:
                    vecs.append(AlgebraElement(A, prod).vector())
    return Subspace(A.field, A.dim, vecs)


def lambda_e(A: BoundQuiverAlgebra, e) -> QuotientAlgebra:
    """The quotient ``A / A (1 - e) A`` for a vertex idempotent ``e``."""
    e = as_idempotent(e)
    unknown = e.vertices - set(A.vertices)
    if unknown:
        raise KeyError(f"unknown vertices {sorted(map(str, unknown))}")
    killed = killed_ideal(A, e)
    if not killed.dim:
        return QuotientAlgebra(A, e, killed, A)
    q = A.quiver
    keep = [v for v in q.vertices if v in e.vertices]
    sub = Quiver(keep, [a for a in q.arrows if a.source in e.vertices and a.target in e.vertices])
    n = A.nilpotency_degree
    field = A.field
    rels = []
    for a in keep:
        candidates = [p for p in paths_from(sub, a, n) if p.length >= 2]
        for b in keep:
            paths = sorted((p for p in candidates if p.target == b), key=sub.path_key, reverse=True)
            if not paths:
                continue
            images = [killed.reduce(A.reduce(p).vector()) for p in paths]
            # kernel of the row map path -> image
            cols = list(zip(*images)) if images else []
            ker = kernel_vectors(cols, len(paths), field)
            if not ker:
                continue
            red, _ = rref_rows(ker, len(paths), field)
            for row in red:
                rels.append(PathVector({p: c for p, c in zip(paths, row) if c}, field))
    presented = build_algebra(sub, rels, cap=A.cap, field=field)
    if presented.dim != A.dim - killed.dim:
        raise AssertionError("presentation of the quotient has the wrong dimension")
    return QuotientAlgebra(A, e, killed, presented)
