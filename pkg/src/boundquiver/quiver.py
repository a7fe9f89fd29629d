"""Finite quivers, paths, formal path combinations and cycle combinatorics.

Paths compose left to right: ``alpha*beta`` means first ``alpha`` then
``beta``, so the target of each arrow is the source of the next one.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .linalg import Field, QQ, field_of

Vertex = Hashable


class Arrow(NamedTuple):
    label: str
    source: Vertex
    target: Vertex


@dataclass(frozen=True)
class Path:
    """A path in a quiver.  ``arrows`` is empty for the trivial path at ``source``."""

    source: Vertex
    target: Vertex
    arrows: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.source, self.target, self.arrows)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Path):
            return NotImplemented
        return (self._hash == other._hash and self.arrows == other.arrows
                and self.source == other.source and self.target == other.target)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __str__(self):
        if not self.arrows:
            return f"e({self.source})"
        return "*".join(self.arrows)


class Quiver:
    """A finite quiver with ordered vertices and uniquely labelled arrows."""

    def __init__(self, vertices: Iterable[Vertex], arrows: Iterable[Sequence]):
        self.vertices: Tuple[Vertex, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex")
        self.arrows: Tuple[Arrow, ...] = tuple(Arrow(*a) for a in arrows)
        self._by_label: Dict[str, Arrow] = {}
        vset = set(self.vertices)
        for a in self.arrows:
            if a.label in self._by_label:
                raise ValueError(f"duplicate arrow label {a.label!r}")
            if a.source not in vset or a.target not in vset:
                raise ValueError(f"arrow {a.label!r} has an undeclared endpoint")
            self._by_label[a.label] = a
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self._out: Dict[Vertex, List[Arrow]] = {v: [] for v in self.vertices}
        self._in: Dict[Vertex, List[Arrow]] = {v: [] for v in self.vertices}
        for a in sorted(self.arrows, key=lambda a: a.label):
            self._out[a.source].append(a)
            self._in[a.target].append(a)

    def arrow(self, label: str) -> Arrow:
        return self._by_label[label]

    def has_arrow(self, label: str) -> bool:
        return label in self._by_label

    def arrows_from(self, v) -> List[Arrow]:
        return self._out[v]

    def arrows_into(self, v) -> List[Arrow]:
        return self._in[v]

    def arrows_between(self, u, v) -> List[Arrow]:
        return [a for a in self._out[u] if a.target == v]

    def loops(self, v) -> List[Arrow]:
        return self.arrows_between(v, v)

    def trivial(self, v) -> Path:
        if v not in self.vertex_index:
            raise KeyError(f"unknown vertex {v!r}")
        return Path(v, v, ())

    def path(self, labels: Sequence[str]) -> Path:
        """Build a path from a label sequence; raises ValueError if not composable."""
        if not labels:
            raise ValueError("use trivial(v) for a trivial path")
        arrows = [self.arrow(l) for l in labels]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise ValueError(f"{a.label}*{b.label} is not composable")
        return Path(arrows[0].source, arrows[-1].target, tuple(labels))

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.label, a.target, a.source) for a in self.arrows])

    def path_key(self, p: Path):
        """Length-first, then lexicographic on arrow labels, then source vertex."""
        return (len(p.arrows), p.arrows, self.vertex_index[p.source])

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def compose(p: Path, q: Path) -> Optional[Path]:
    """``p`` followed by ``q``, or None when ``p`` does not end where ``q`` starts."""
    if p.target != q.source:
        return None
    return Path(p.source, q.target, p.arrows + q.arrows)


def paths_from(q: Quiver, v, max_length: int) -> List[Path]:
    out = [Path(v, v, ())]
    frontier = out[:]
    for _ in range(max_length):
        nxt = []
        for p in frontier:
            for a in q.arrows_from(p.target):
                nxt.append(Path(p.source, a.target, p.arrows + (a.label,)))
        out.extend(nxt)
        frontier = nxt
    return out


def paths_up_to(q: Quiver, max_length: int) -> List[Path]:
    """All paths of length at most ``max_length`` in length-lex order."""
    if max_length < 0:
        raise ValueError("length must be non-negative")
    out = []
    for v in q.vertices:
        out.extend(paths_from(q, v, max_length))
    out.sort(key=q.path_key)
    return out


def reverse_path(p: Path) -> Path:
    return Path(p.target, p.source, tuple(reversed(p.arrows)))


# ---------------------------------------------------------------------------
# formal linear combinations of paths


class PathVector:
    """Finite formal combination of paths with exact coefficients (no zero terms)."""

    __slots__ = ("field", "terms")

    def __init__(self, terms: Optional[Dict[Path, object]] = None, field: Field = QQ):
        self.field = field
        self.terms: Dict[Path, object] = {}
        for p, c in (terms or {}).items():
            c = field(c)
            if c:
                self.terms[p] = c

    @classmethod
    def of(cls, path: Path, coeff=1, field: Field = QQ) -> "PathVector":
        return cls({path: coeff}, field)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "PathVector") -> "PathVector":
        field = field_of(self, other)
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, field.zero) + c
        return PathVector(terms, field)

    def __neg__(self):
        return PathVector({p: -c for p, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PathVector":
        c = self.field(c)
        return PathVector({p: c * x for p, x in self.terms.items()}, self.field)

    def paths(self) -> List[Path]:
        return list(self.terms)

    def endpoints(self):
        return {(p.source, p.target) for p in self.terms}

    def min_length(self) -> int:
        return min(len(p) for p in self.terms)

    def max_length(self) -> int:
        return max(len(p) for p in self.terms)

    def multiply(self, left: Path, right: Path) -> "PathVector":
        """``left * self * right`` for paths ``left``, ``right`` (zero terms dropped)."""
        out = {}
        for p, c in self.terms.items():
            lp = compose(left, p)
            if lp is None:
                continue
            lpr = compose(lp, right)
            if lpr is not None:
                out[lpr] = c
        return PathVector(out, self.field)

    def reversed(self) -> "PathVector":
        return PathVector({reverse_path(p): c for p, c in self.terms.items()}, self.field)

    def __eq__(self, other):
        if not isinstance(other, PathVector):
            return NotImplemented
        return self.field is other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "PathVector(0)"
        parts = [f"{c} {p}" for p, c in self.terms.items()]
        return "PathVector(" + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# cycles


def _check_cycle(c: Path):
    if c.source != c.target or c.length < 1:
        raise ValueError("a cycle is a non-trivial path with source = target")


def rotate(q: Quiver, c: Path, i: int) -> Path:
    arrows = c.arrows[i:] + c.arrows[:i]
    start = q.arrow(arrows[0]).source
    return Path(start, start, arrows)


def cyclic_permutations(q: Quiver, c: Path) -> List[Path]:
    """The rotations ``a_i ... a_r a_1 ... a_{i-1}`` for ``i = 1..r`` (duplicates kept)."""
    _check_cycle(c)
    return [rotate(q, c, i) for i in range(c.length)]


def support(q: Quiver, c: Path) -> frozenset:
    """Starting vertices of the arrows of ``c``."""
    _check_cycle(c)
    return frozenset(q.arrow(l).source for l in c.arrows)


def primitive_root(q: Quiver, c: Path) -> Path:
    """Shortest cycle whose power is ``c``."""
    _check_cycle(c)
    word = c.arrows
    r = len(word)
    for d in range(1, r + 1):
        if r % d == 0 and word[:d] * (r // d) == word:
            return Path(c.source, c.source, word[:d])
    return c


def is_primitive(q: Quiver, c: Path) -> bool:
    return primitive_root(q, c).length == c.length


def canonical_rotation(q: Quiver, c: Path) -> Path:
    """The rotation with the lexicographically least label sequence."""
    return min(cyclic_permutations(q, c), key=lambda p: p.arrows)


def closed_paths(q: Quiver, max_length: int) -> List[Path]:
    """Every cycle of length 1..max_length (all rotations listed)."""
    out = []
    for v in q.vertices:
        for p in paths_from(q, v, max_length):
            if p.length >= 1 and p.target == v:
                out.append(p)
    out.sort(key=q.path_key)
    return out
