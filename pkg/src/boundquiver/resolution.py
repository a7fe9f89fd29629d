"""Projective resolutions, comparison lifts and the horseshoe construction."""
from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import BoundQuiverAlgebra, Idempotent, as_idempotent
from .errors import NonExactSequence
from .linalg import rref_rows
from .modules import (
    FDModule,
    LambdaMatrix,
    ModuleHom,
    ProjectiveSum,
    cover_map,
    iso_test,
    left_kernel,
    matmul,
    projective,
    row_rank,
    simple,
    submodule_from_subspaces,
    top_generators,
    transpose,
    zero_module,
)


def solve_many(rows: Sequence[Sequence], targets: Sequence[Sequence], field) -> List[Optional[list]]:
    """For each target ``t`` some ``x`` with ``x @ rows = t`` (free variables zero)."""
    n = len(rows)
    if not targets:
        return []
    m = len(targets[0])
    cols = transpose(rows, m)
    aug = [list(c) + [t[r] for t in targets] for r, c in enumerate(cols)]
    red, piv = rref_rows(aug, n + len(targets), field)
    out = []
    zero = field.zero
    for k in range(len(targets)):
        col = n + k
        bad = any(red[i][col] for i, c in enumerate(piv) if c >= n)
        if bad:
            out.append(None)
            continue
        x = [zero] * n
        for i, c in enumerate(piv):
            if c < n:
                x[c] = red[i][col]
        out.append(x)
    return out


class Resolution:
    """A (possibly truncated) projective resolution ``P_i -> ... -> P_0 -> M``.

    ``differentials[i - 1]`` is ``d_i : P_i -> P_{i-1}``.  ``terminated``
    means the resolution is complete: the next syzygy is zero.
    """

    def __init__(self, module: FDModule, terms, differentials, augmentation: Optional[ModuleHom],
                 terminated: bool, concrete: Optional[Dict[int, ModuleHom]] = None,
                 kernels: Optional[List[Dict]] = None):
        self.module = module
        self.algebra: BoundQuiverAlgebra = module.algebra
        self.terms: List[ProjectiveSum] = [ProjectiveSum(t) for t in terms]
        self.differentials: List[LambdaMatrix] = list(differentials)
        self.augmentation = augmentation
        self.terminated = terminated
        self._concrete: Dict[int, ModuleHom] = dict(concrete or {})
        if augmentation is not None:
            self._concrete[0] = augmentation
        self._kernels = list(kernels or [])
        self._syzygies: Dict[int, FDModule] = {}

    @property
    def length(self) -> int:
        """Number of computed terms."""
        return len(self.terms)

    @property
    def projective_dimension(self) -> Optional[int]:
        """``len(terms) - 1`` when terminated, else None (unknown)."""
        if not self.terminated:
            return None
        return len(self.terms) - 1

    def term_module(self, i: int):
        return projective(self.algebra, self.terms[i])

    def concrete(self, i: int) -> ModuleHom:
        """``d_i`` as a module map (``i = 0`` is the augmentation)."""
        h = self._concrete.get(i)
        if h is None:
            h = self._concrete[i] = self.differentials[i - 1].to_hom()
        return h

    def top_multiplicity(self, i: int, v) -> int:
        if i >= len(self.terms):
            return 0
        return sum(1 for x in self.terms[i] if x == v)

    def kernel(self, i: int) -> Dict:
        while len(self._kernels) <= i:
            self._kernels.append(self.concrete(len(self._kernels)).kernel())
        return self._kernels[i]

    def syzygy_module(self, i: int) -> FDModule:
        """``Omega^i M``: the kernel of ``d_{i-1}`` (``Omega^0 M = M``)."""
        if i == 0:
            return self.module
        if i > len(self.terms):
            if self.terminated:
                return zero_module(self.algebra)
            raise IndexError("syzygy beyond the computed range")
        if i not in self._syzygies:
            P = self.term_module(i - 1)
            self._syzygies[i] = submodule_from_subspaces(P, self.kernel(i - 1))[0]
        return self._syzygies[i]

    def syzygy_dims(self, i: int) -> Tuple[int, ...]:
        """Dimension vector of ``Omega^i M`` without building the module."""
        if i == 0:
            return self.module.dim_vector()
        if i > len(self.terms):
            if self.terminated:
                return tuple(0 for _ in self.algebra.vertices)
            raise IndexError("syzygy beyond the computed range")
        ker = self.kernel(i - 1)
        return tuple(ker[v].dim for v in self.algebra.vertices)

    def is_minimal(self) -> bool:
        return all(d.in_radical() for d in self.differentials)

    def verify_exact(self) -> bool:
        """Exactness at every computed stage by exact rank counts and ``d d = 0``."""
        A = self.algebra
        field = A.field
        M = self.module
        if not self.terms:
            return M.is_zero()
        aug = self.concrete(0)
        for w in A.vertices:
            if row_rank(aug.mats[w], M.dims[w], field) != M.dims[w]:
                return False
        for i in range(len(self.terms)):
            P = self.term_module(i)
            out_map = self.concrete(i)
            if i + 1 < len(self.terms):
                in_map = self.concrete(i + 1)
                comp = in_map.then(out_map)
                if not comp.is_zero():
                    return False
            elif not self.terminated:
                continue
            else:
                in_map = None
            for w in A.vertices:
                r_out = row_rank(out_map.mats[w], out_map.target.dims[w], field)
                r_in = 0 if in_map is None else row_rank(in_map.mats[w], P.dims[w], field)
                if r_out + r_in != P.dims[w]:
                    return False
        return True

    def __repr__(self):
        state = "terminated" if self.terminated else "truncated"
        return f"Resolution({' <- '.join(map(repr, self.terms))}; {state})"


def minimal_resolution(M: FDModule, depth: int, max_dim: Optional[int] = None) -> Resolution:
    """Minimal projective resolution of ``M`` computed through ``P_depth``.

    Stops early (unterminated) when a syzygy exceeds ``max_dim``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    A = M.algebra
    if M.is_zero():
        return Resolution(M, [], [], None, True)
    gens = top_generators(M)
    P = projective(A, [v for v, _ in gens])
    aug = cover_map(P, M, gens)
    terms = [P.summands]
    diffs = []
    concrete = {0: aug}
    kernels = [aug.kernel()]
    terminated = False
    i = 0
    while True:
        K = kernels[-1]
        if all(K[v].dim == 0 for v in A.vertices):
            terminated = True
            break
        if i >= depth:
            break
        if max_dim is not None and sum(K[v].dim for v in A.vertices) > max_dim:
            break
        gens = top_generators(P, K)
        Pn = projective(A, [v for v, _ in gens])
        d = cover_map(Pn, P, gens)
        diffs.append(LambdaMatrix.from_columns(A, Pn.summands, P.summands,
                                               [P.split(v, g) for v, g in gens]))
        i += 1
        concrete[i] = d
        terms.append(Pn.summands)
        kernels.append(d.kernel())
        P = Pn
    return Resolution(M, terms, diffs, aug, terminated, concrete, kernels)


def projective_dimension(M: FDModule, depth: int, max_dim: Optional[int] = None) -> Optional[int]:
    return minimal_resolution(M, depth, max_dim).projective_dimension


def simple_resolution(A: BoundQuiverAlgebra, v, depth: int, max_dim: Optional[int] = None) -> Resolution:
    cache = A.__dict__.setdefault("_simple_res_cache", {})
    key = (v, depth, max_dim)
    res = cache.get(key)
    if res is None:
        res = cache[key] = minimal_resolution(simple(A, v), depth, max_dim)
    return res


def injective_dimension_simple(A: BoundQuiverAlgebra, v, depth: int,
                               max_dim: Optional[int] = None) -> Optional[int]:
    """``id S_v`` via the projective dimension of the simple over the opposite algebra."""
    return simple_resolution(A.opposite(), v, depth, max_dim).projective_dimension


def injective_dimension_semisimple(A: BoundQuiverAlgebra, e, depth: int,
                                   max_dim: Optional[int] = None) -> Optional[int]:
    """``id S_e`` (max over the vertices of ``e``); -1 for ``e = 0``; None if unknown."""
    e = as_idempotent(e)
    out = -1
    for v in e.sorted(A):
        d = injective_dimension_simple(A, v, depth, max_dim)
        if d is None:
            return None
        out = max(out, d)
    return out


# ---------------------------------------------------------------------------
# e-bounded horizons


def _avoids(term: ProjectiveSum, e: Idempotent) -> bool:
    return all(v not in e.vertices for v in term)


def e_bounded_horizon(res: Resolution, e, injective_dim: Optional[int] = None,
                      periodicity: Optional[Tuple[int, int]] = None) -> Optional[int]:
    """Least ``m`` such that every term ``P_i`` with ``i >= m`` has top killed by ``e``.

    Beyond the computed terms this is only asserted when it is certified:
    the resolution terminated; ``S_e`` has injective dimension
    ``injective_dim`` (then ``Ext^i(M, S_e) = 0`` for larger ``i``); or the
    syzygies are periodic, ``Omega^i M = Omega^j M`` for ``periodicity = (i, j)``.
    Returns None when nothing is certified.
    """
    e = as_idempotent(e)
    terms = res.terms

    def least_from(upper):
        m = upper
        while m > 0 and _avoids(terms[m - 1], e):
            m -= 1
        return m

    if res.terminated:
        return least_from(len(terms))
    # the remaining certificates speak about minimal resolutions only
    if not res.is_minimal():
        return None
    if injective_dim is not None:
        d = injective_dim
        if len(terms) > d + 1:
            if not all(_avoids(t, e) for t in terms[d + 1:]):
                raise AssertionError("terms beyond the injective dimension meet e")
            return least_from(d + 1)
        if len(terms) == d + 1:
            return least_from(d + 1)
    if periodicity is not None:
        i, j = periodicity
        if len(terms) >= j and all(_avoids(t, e) for t in terms[i:j]):
            return least_from(i) if i > 0 else 0
    return None


def find_syzygy_periodicity(res: Resolution, upto: Optional[int] = None, seed: int = 0):
    """First ``(i, j, iso)`` with ``Omega^i M = Omega^j M`` non-zero, ``i < j <= upto``."""
    if res.terminated:
        return None
    top_index = len(res.terms) if upto is None else min(upto, len(res.terms))
    dims = []
    for j in range(0, top_index + 1):
        dims.append(res.syzygy_dims(j))
        if not any(dims[j]):
            return None
        for i in range(j):
            # modules are built only for candidate pairs
            if dims[i] != dims[j]:
                continue
            iso = iso_test(res.syzygy_module(i), res.syzygy_module(j), seed=seed)
            if iso is not None:
                return (i, j, iso)
    return None


# ---------------------------------------------------------------------------
# lifting endomorphisms


def lift_endomorphism(phi: ModuleHom, res: Resolution, upto: Optional[int] = None,
                      rng: Optional[random.Random] = None) -> List[LambdaMatrix]:
    """Chain maps ``phi_i : P_i -> P_i`` over ``phi`` for ``i < upto``.

    Each ``phi_i`` solves ``d_i phi_i = phi_{i-1} d_i`` (``aug phi_0 = phi aug``)
    generator by generator.  With ``rng`` a random kernel element is added
    to every solution, giving an independent lift.
    """
    A = res.algebra
    field = A.field
    n = len(res.terms) if upto is None else min(upto, len(res.terms))
    lifts: List[LambdaMatrix] = []
    for i in range(n):
        P = res.term_module(i)
        D = res.concrete(i)
        by_vertex: Dict = {}
        targets = []
        if i == 0:
            for j, v in enumerate(P.summands):
                g = D.apply(v, P.generator(j))
                targets.append((j, v, phi.apply(v, g)))
        else:
            comp = lifts[-1] @ res.differentials[i - 1]
            Q = res.term_module(i - 1)
            for j, v in enumerate(P.summands):
                targets.append((j, v, Q.join(v, comp.column(j))))
        for j, v, t in targets:
            by_vertex.setdefault(v, []).append((j, t))
        cols: List = [None] * len(P.summands)
        for v, items in by_vertex.items():
            sols = solve_many(D.mats[v], [t for _, t in items], field)
            ker = left_kernel(D.mats[v], D.target.dims[v], field).basis if rng is not None else ()
            for (j, _), x in zip(items, sols):
                if x is None:
                    raise NonExactSequence(f"no lift at degree {i}; resolution is not exact")
                for kv in ker:
                    c = rng.randint(-2, 2)
                    if c:
                        x = [a + c * b for a, b in zip(x, kv)]
                cols[j] = P.split(v, x)
        lifts.append(LambdaMatrix.from_columns(A, P.summands, P.summands, cols))
    return lifts


def check_lift(phi: ModuleHom, res: Resolution, lifts: Sequence[LambdaMatrix]) -> bool:
    """Whether ``lifts`` commute with the differentials and the augmentation."""
    if not lifts:
        return True
    aug = res.concrete(0)
    if lifts[0].to_hom().then(aug) != aug.then(phi):
        return False
    for i in range(1, len(lifts)):
        d = res.differentials[i - 1]
        if d @ lifts[i] != lifts[i - 1] @ d:
            return False
    return True


# ---------------------------------------------------------------------------
# horseshoe and padding


def horseshoe(u: ModuleHom, v: ModuleHom, res_L: Resolution, res_N: Resolution):
    """Resolution of the middle term of ``0 -> L -u-> M -v-> N -> 0``.

    Returns ``(res_M, q, p)`` with ``res_M`` having terms ``P_i + P'_i``,
    differentials ``[[d_i, lam_i], [0, d'_i]]`` and ``q_i``, ``p_i`` the
    inclusion of and projection onto the outer summands.
    """
    L, M, N = u.source, u.target, v.target
    A = M.algebra
    field = A.field
    if v.source is not M or res_L.module is not L or res_N.module is not N:
        raise NonExactSequence("maps and resolutions do not fit together")
    if not (u.is_injective() and v.is_surjective() and u.then(v).is_zero()
            and all(M.dims[w] == L.dims[w] + N.dims[w] for w in A.vertices)):
        raise NonExactSequence("input sequence is not short exact")

    def term(res, i):
        if i < len(res.terms):
            return res.terms[i]
        if res.terminated:
            return ProjectiveSum()
        return None

    if res_L.terminated and res_N.terminated:
        length = max(len(res_L.terms), len(res_N.terms))
    elif res_L.terminated:
        length = len(res_N.terms)
    elif res_N.terminated:
        length = len(res_L.terms)
    else:
        length = min(len(res_L.terms), len(res_N.terms))
    terminated = res_L.terminated and res_N.terminated

    def concrete(res, i):
        if i < len(res.terms):
            return res.concrete(i)
        return None

    def diff(res, i, src, tgt):
        if i - 1 < len(res.differentials) and i < len(res.terms):
            return res.differentials[i - 1]
        return LambdaMatrix.zero(A, src, tgt)

    # sigma : P'_0 -> M lifting the augmentation of N through v
    PN0 = projective(A, term(res_N, 0) or ())
    sig_gens = []
    for j, w in enumerate(PN0.summands):
        y = res_N.concrete(0).apply(w, PN0.generator(j))
        x = solve_many(v.mats[w], [y], field)[0]
        sig_gens.append((w, x))
    sigma = cover_map(PN0, M, sig_gens)

    PL0 = projective(A, term(res_L, 0) or ())
    terms = []
    diffs = []
    lams: List[LambdaMatrix] = []
    aug_gens = []
    if len(PL0.summands):
        uaug = res_L.concrete(0).then(u)
        for j, w in enumerate(PL0.summands):
            aug_gens.append((w, uaug.apply(w, PL0.generator(j))))
    aug_gens.extend(sig_gens)
    P0 = projective(A, PL0.summands + PN0.summands)
    aug = cover_map(P0, M, aug_gens)
    terms.append(P0.summands)

    for i in range(1, length):
        tl, tn = term(res_L, i), term(res_N, i)
        tl_prev, tn_prev = term(res_L, i - 1), term(res_N, i - 1)
        dN = diff(res_N, i, tn, tn_prev)
        dL = diff(res_L, i, tl, tl_prev)
        PNi = projective(A, tn)
        targets = []
        if i == 1:
            # u aug_L lam_1 = - sigma d'_1
            for j, w in enumerate(PNi.summands):
                y = projective(A, tn_prev).join(w, dN.column(j))
                targets.append((j, w, [-x for x in sigma.apply(w, y)]))
            solver = res_L.concrete(0).then(u) if len(tl_prev) else None
        else:
            # d_{i-1} lam_i = - lam_{i-1} d'_i
            comp = lams[-1] @ dN
            Q = projective(A, term(res_L, i - 2))
            for j, w in enumerate(PNi.summands):
                targets.append((j, w, [-x for x in Q.join(w, comp.column(j))]))
            solver = concrete(res_L, i - 1) if len(tl_prev) else None
        PLprev = projective(A, tl_prev)
        cols = []
        for j, w, t in targets:
            if solver is None:
                if any(t):
                    raise NonExactSequence("horseshoe step has no solution")
                cols.append([])
                continue
            x = solve_many(solver.mats[w], [t], field)[0]
            if x is None:
                raise NonExactSequence(f"horseshoe step {i} has no solution")
            cols.append(PLprev.split(w, x))
        lam = LambdaMatrix.from_columns(A, tn, tl_prev, cols)
        lams.append(lam)
        zero_block = LambdaMatrix.zero(A, tl, tn_prev)
        d = _block2(A, dL, lam, zero_block, dN)
        diffs.append(d)
        terms.append(ProjectiveSum(tl + tn))

    res_M = Resolution(M, terms, diffs, aug, terminated)
    q, p = [], []
    for i, t in enumerate(terms):
        tl = term(res_L, i)
        tn = term(res_N, i)
        q.append(LambdaMatrix.from_columns(
            A, tl, t, [[A.trivial(tl[j]) if k == j else A.zero() for k in range(len(t))]
                       for j in range(len(tl))]))
        p.append(LambdaMatrix.from_columns(
            A, t, tn, [[A.trivial(tn[k]) if len(tl) + k == j else A.zero()
                        for k in range(len(tn))] for j in range(len(t))]))
    return res_M, q, p


def _block2(A, a: LambdaMatrix, b: LambdaMatrix, c: LambdaMatrix, d: LambdaMatrix) -> LambdaMatrix:
    """``[[a, b], [c, d]]`` allowing empty blocks."""
    source = ProjectiveSum(a.source + b.source)
    target = ProjectiveSum(a.target + c.target)
    ents = []
    for i in range(len(a.target)):
        ents.append(list(a.entries[i]) + list(b.entries[i]))
    for i in range(len(c.target)):
        ents.append(list(c.entries[i]) + list(d.entries[i]))
    return LambdaMatrix(A, source, target, ents, check=False)


def pad_resolution(res: Resolution, position: int, extra) -> Resolution:
    """Add a split acyclic piece ``Q -id-> Q`` in degrees ``position + 1, position``.

    The result is again a projective resolution of the same module but no
    longer minimal.  On a truncated resolution the last computed term
    cannot be padded: the new differential would miss its kernel.
    """
    A = res.algebra
    Qs = ProjectiveSum(extra)
    if position >= len(res.terms):
        raise ValueError("position beyond the computed terms")
    if not res.terminated and position == len(res.terms) - 1:
        raise ValueError("cannot pad the last term of a truncated resolution")
    terms = list(res.terms)
    diffs = list(res.differentials)
    i = position
    Pi = terms[i]
    has_next = i + 1 < len(terms)
    Pn = terms[i + 1] if has_next else ProjectiveSum()
    new_i = ProjectiveSum(Pi + Qs)
    new_n = ProjectiveSum(Pn + Qs)
    ident = LambdaMatrix.identity(A, Qs)
    # d_{i+1}: Pn + Q -> Pi + Q
    d_next = diffs[i] if has_next else LambdaMatrix.zero(A, Pn, Pi)
    diffs_new = list(diffs)
    blk = _block2(A, d_next, LambdaMatrix.zero(A, Qs, Pi), LambdaMatrix.zero(A, Pn, Qs), ident)
    if has_next:
        diffs_new[i] = blk
    else:
        diffs_new.append(blk)
    # d_i: Pi + Q -> P_{i-1}
    if i >= 1:
        d = diffs[i - 1]
        diffs_new[i - 1] = _block2(A, d, LambdaMatrix.zero(A, Qs, d.target),
                                   LambdaMatrix.zero(A, d.source, ()), LambdaMatrix.zero(A, Qs, ()))
    # d_{i+2}: P_{i+2} -> Pn + Q
    if i + 2 < len(terms):
        d = diffs[i + 1]
        diffs_new[i + 1] = _block2(A, d, LambdaMatrix.zero(A, (), d.target),
                                   LambdaMatrix.zero(A, d.source, Qs), LambdaMatrix.zero(A, (), Qs))
    terms[i] = new_i
    if has_next:
        terms[i + 1] = new_n
    else:
        terms.append(new_n)
    M = res.module
    P0 = projective(A, terms[0])
    old_aug = res.concrete(0)
    if i == 0:
        old_P0 = res.term_module(0)
        gens = [(w, old_aug.apply(w, old_P0.generator(j))) for j, w in enumerate(old_P0.summands)]
        gens += [(w, [A.field.zero] * M.dims[w]) for w in Qs]
        aug = cover_map(P0, M, gens)
    else:
        aug = old_aug
    return Resolution(M, terms, diffs_new, aug, res.terminated)


# ---------------------------------------------------------------------------
# Ext and periodicity of simples


def ext_self_dims(A: BoundQuiverAlgebra, v, depth: int, max_dim: Optional[int] = None) -> List[int]:
    """``dim Ext^i(S_v, S_v)`` for ``i = 1..depth`` from the minimal resolution."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    res = simple_resolution(A, v, depth, max_dim)
    if not res.terminated and len(res.terms) <= depth:
        raise ValueError("resolution stopped early; raise max_dim")
    return [res.top_multiplicity(i, v) for i in range(1, depth + 1)]


def ext1_dims(A: BoundQuiverAlgebra) -> Dict[tuple, int]:
    """``dim Ext^1(S_i, S_j)`` for all vertex pairs, from syzygy tops."""
    out = {}
    for i in A.vertices:
        res = simple_resolution(A, i, 1)
        for j in A.vertices:
            out[i, j] = res.top_multiplicity(1, j)
    return out


def periodicity_certificate(A: BoundQuiverAlgebra, v, depth: int, seed: int = 0,
                            max_dim: Optional[int] = None):
    """``(i, j, iso)`` with ``Omega^i S_v = Omega^j S_v`` non-zero and ``i < j <= depth``."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    res = simple_resolution(A, v, depth, max_dim)
    return find_syzygy_periodicity(res, upto=depth, seed=seed)
