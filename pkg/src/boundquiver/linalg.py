"""Exact dense linear algebra over the rationals and prime fields.

Rationals are ``gmpy2.mpq`` values (always in lowest terms).  Elements of
``F_p`` are instances of a small per-prime class so that the same operator
code works for both ground fields.  Elimination is deterministic: columns
are scanned left to right and the first row with a non-zero entry in the
current column becomes the pivot row.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import gmpy2

from .errors import FieldMismatch

__all__ = [
    "Field",
    "Matrix",
    "Subspace",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "membership",
    "QQ",
    "GF",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class _FpElement:
    """Residue class modulo the class attribute ``p``."""

    __slots__ = ("v",)
    p = 2

    def __init__(self, v):
        self.v = int(v) % self.p

    def _coerce(self, other):
        if isinstance(other, _FpElement):
            if other.p != self.p:
                raise FieldMismatch(f"F_{self.p} and F_{other.p} elements mixed")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(self.v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(self.v - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(o - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(self.v * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        o %= self.p
        if o == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return type(self)(self.v * pow(o, -1, self.p))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return type(self)(o * pow(self.v, -1, self.p))

    def __neg__(self):
        return type(self)(-self.v)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, _FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def __str__(self):
        return str(self.v)


@lru_cache(maxsize=None)
def _fp_class(p: int):
    return type(f"F{p}", (_FpElement,), {"__slots__": (), "p": p})


class Field:
    """The ground field: the rationals or a prime field ``F_p``.

    Calling the field converts ints, fractions, ``mpq`` values and strings
    such as ``"2/3"`` into field elements.
    """

    _cache: dict = {}

    def __new__(cls, p: Optional[int] = None):
        key = p
        if key in cls._cache:
            return cls._cache[key]
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self = super().__new__(cls)
        self.p = p
        self._elt = None if p is None else _fp_class(p)
        cls._cache[key] = self
        return self

    @classmethod
    def rational(cls) -> "Field":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(int(p))

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def tag(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, _FpElement):
                raise FieldMismatch("cannot convert an F_p element to a rational")
            if isinstance(x, str):
                return gmpy2.mpq(Fraction(x.strip()))
            return gmpy2.mpq(x)
        if isinstance(x, self._elt):
            return x
        if isinstance(x, _FpElement):
            raise FieldMismatch(f"F_{x.p} element used over F_{self.p}")
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, int):
            return self._elt(x)
        q = Fraction(int(x.numerator), int(x.denominator))
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"{q} has no image in F_{self.p}")
        return self._elt(q.numerator * pow(q.denominator, -1, self.p))

    def contains(self, x) -> bool:
        if self.p is None:
            return type(x) is type(gmpy2.mpq(0))
        return isinstance(x, self._elt)

    def __repr__(self):
        return "Field.rational()" if self.p is None else f"Field.prime({self.p})"

    def __reduce__(self):
        return (Field, (self.p,))


QQ = Field.rational()


def GF(p: int) -> Field:
    return Field.prime(p)


def field_of(*objs) -> Field:
    fields = {o.field for o in objs}
    if len(fields) != 1:
        raise FieldMismatch("mixed field tags: " + ", ".join(sorted(f.tag for f in fields)))
    return fields.pop()


# ---------------------------------------------------------------------------
# raw elimination kernels on lists of rows


def _rref_inplace(rows: list, ncols: int, field: Field) -> list:
    """Row-reduce ``rows`` in place; return pivot columns.  Zero rows move last."""
    if field.p is not None:
        p = field.p
        elt = field._elt
        raw = [[int(x) % p for x in r] for r in rows]
        piv = _rref_modp(raw, ncols, p)
        # elements are immutable, so one instance per residue can be shared
        table = [elt(x) for x in range(p)]
        for i, r in enumerate(raw):
            rows[i] = [table[x] for x in r] if i < len(piv) else [table[0]] * ncols
        return piv
    piv = []
    nrows = len(rows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = r
        while k < nrows and not rows[k][c]:
            k += 1
        if k == nrows:
            continue
        if k != r:
            rows[r], rows[k] = rows[k], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = rows[r] = [x * inv for x in prow]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        piv.append(c)
        r += 1
    return piv


def _rref_modp(rows: list, ncols: int, p: int) -> list:
    piv = []
    nrows = len(rows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = r
        while k < nrows and not rows[k][c]:
            k += 1
        if k == nrows:
            continue
        if k != r:
            rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        prow = rows[r] = [x * inv % p for x in rows[r]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        piv.append(c)
        r += 1
    return piv


def rref_rows(rows: Sequence[Sequence], ncols: int, field: Field):
    """Return ``(nonzero rref rows, pivots)`` for a list of dense rows."""
    work = [list(r) for r in rows]
    piv = _rref_inplace(work, ncols, field)
    return work[: len(piv)], piv


def kernel_vectors(rows: Sequence[Sequence], ncols: int, field: Field) -> list:
    """Standard kernel basis: one vector per free column, 1 in that column."""
    red, piv = rref_rows(rows, ncols, field)
    pivset = set(piv)
    zero, one = field.zero, field.one
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [zero] * ncols
        x[f] = one
        for i, c in enumerate(piv):
            x[c] = -red[i][f]
        out.append(x)
    return out


def solve_rows(rows: Sequence[Sequence], b: Sequence, ncols: int, field: Field):
    """Solve ``rows @ x = b``; free variables are set to zero.  None if inconsistent."""
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    red, piv = rref_rows(aug, ncols + 1, field)
    if piv and piv[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for i, c in enumerate(piv):
        x[c] = red[i][ncols]
    return x


# ---------------------------------------------------------------------------
# public value types


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows: Iterable[Iterable], ncols: Optional[int] = None):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.nrows else [], self.nrows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        field = field_of(self, other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        zero = field.zero
        out = []
        for r in self.rows:
            out.append([sum((a * b for a, b in zip(r, c) if a), zero) for c in cols])
        return Matrix(field, out, other.ncols)

    def apply(self, v: Sequence) -> list:
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        zero = self.field.zero
        return [sum((a * b for a, b in zip(r, v) if a), zero) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field is other.field and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field.tag, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix[{self.field.tag}]({self.nrows}x{self.ncols}: {body})"


class Subspace:
    """A subspace of ``field^ambient`` held as a reduced row-echelon basis.

    Because the basis is in rref, the coordinates of a member vector are
    simply its entries at the pivot columns.
    """

    __slots__ = ("field", "ambient", "basis", "pivots", "_pivset")

    def __init__(self, field: Field, ambient: int, basis=(), pivots=None):
        if pivots is None:
            basis, pivots = rref_rows(basis, ambient, field)
        self.field = field
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(pivots)
        self._pivset = frozenset(self.pivots)

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [[field(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ValueError("vector length differs from ambient dimension")
        return cls(field, ambient, vecs)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        one, zero = field.one, field.zero
        rows = [[one if i == j else zero for j in range(ambient)] for i in range(ambient)]
        return cls(field, ambient, rows, list(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def complement(self) -> list:
        """Non-pivot coordinates; their unit vectors span a complement."""
        return [c for c in range(self.ambient) if c not in self._pivset]

    def reduce(self, v: Sequence) -> list:
        """Normal form of ``v`` modulo the subspace (zero at every pivot)."""
        v = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def coordinates(self, v: Sequence):
        """Coefficients of ``v`` over ``basis``, or None when ``v`` is outside."""
        coeffs = [v[c] for c in self.pivots]
        residual = self.reduce(v)
        if any(residual):
            return None
        return coeffs

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def combine(self, coeffs: Sequence) -> list:
        out = [self.field.zero] * self.ambient
        for f, row in zip(coeffs, self.basis):
            if f:
                out = [a + f * b for a, b in zip(out, row)]
        return out

    def sum(self, other: "Subspace") -> "Subspace":
        field_of(self, other)
        return Subspace(self.field, self.ambient, list(self.basis) + list(other.basis))

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field is other.field and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.field.tag})"


# ---------------------------------------------------------------------------
# operations


def rref(m: Matrix):
    """Reduced row-echelon form of ``m`` and its pivot columns.

    Zero rows are kept (at the bottom) so the shape is preserved.
    """
    work = [list(r) for r in m.rows]
    piv = _rref_inplace(work, m.ncols, m.field)
    return Matrix(m.field, work, m.ncols), tuple(piv)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Subspace:
    """The null space ``{x : m x = 0}`` as a :class:`Subspace` of ``field^cols``."""
    return Subspace(m.field, m.ncols, kernel_vectors(m.rows, m.ncols, m.field))


def solve(a: Matrix, b: Sequence):
    """Some ``x`` with ``a x = b`` (free variables zero), or None if inconsistent."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side length differs from row count")
    b = [a.field(x) for x in b]
    return solve_rows(a.rows, b, a.ncols, a.field)


def membership(s: Subspace, v: Sequence):
    """Coefficients expressing ``v`` over ``s.basis``, or None."""
    if len(v) != s.ambient:
        raise ValueError("vector length differs from ambient dimension")
    return s.coordinates([s.field(x) for x in v])
