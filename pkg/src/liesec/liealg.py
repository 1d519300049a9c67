"""Structure-constant Lie algebras and their structural invariants."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, NamedTuple, Sequence

from .exactla import (
    FieldSpec,
    Matrix,
    Subspace,
    Vector,
    identity,
    image,
    kernel,
    lincomb,
    matmul,
    matvec,
    projective_points,
    rank,
    rref,
    solve_left_membership,
    trace,
)


class CapabilityError(RuntimeError):
    """A question the exact machinery cannot settle in this configuration."""


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class LieAlgebra:
    """A Lie algebra given by structure constants on a basis ``e_0..e_{n-1}``.

    ``sc`` holds ``(i, j, [e_i, e_j])`` for ``i < j`` with nonzero bracket,
    sorted by ``(i, j)``.  Brackets ``[e_i, e_i]`` are zero by construction,
    which keeps the alternating law intact in characteristic 2.
    """

    field: FieldSpec
    dim: int
    sc: tuple = ()
    labels: tuple = ()
    provenance: str = dc_field(default="", compare=False)

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(self.dim)))
        if len(self.labels) != self.dim:
            raise ValueError("one label per basis vector is required")

    @classmethod
    def from_brackets(
        cls,
        F: FieldSpec,
        dim: int,
        brackets: Mapping[tuple[int, int], Sequence | Mapping[int, object]],
        labels: Sequence[str] | None = None,
        provenance: str = "",
    ) -> "LieAlgebra":
        """Build from ``{(i, j): value}``; ``i > j`` entries are negated.

        A value is either a full coefficient vector or a sparse
        ``{index: coefficient}`` map.
        """
        acc: dict[tuple[int, int], list] = {}
        for (i, j), val in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"bracket index ({i}, {j}) out of range")
            if i == j:
                if any(F(x) for x in _dense(val, dim)):
                    raise ValueError(f"[e{i}, e{i}] must vanish")
                continue
            vec = [F(x) for x in _dense(val, dim)]
            if i > j:
                i, j = j, i
                vec = [F(-x) for x in vec]
            if (i, j) in acc:
                raise ValueError(f"bracket ({i}, {j}) given twice")
            acc[(i, j)] = vec
        sc = tuple(
            (i, j, tuple(v)) for (i, j), v in sorted(acc.items()) if any(v)
        )
        return cls(F, dim, sc, tuple(labels) if labels else (), provenance)

    @classmethod
    def from_table(cls, F: FieldSpec, table, labels=None, provenance="") -> "LieAlgebra":
        n = len(table)
        br = {(i, j): table[i][j] for i in range(n) for j in range(i + 1, n)}
        return cls.from_brackets(F, n, br, labels, provenance)

    @cached_property
    def table(self) -> tuple:
        n = self.dim
        z = (self.field.zero,) * n
        t = [[z] * n for _ in range(n)]
        neg = _negator(self.field)
        for i, j, v in self.sc:
            t[i][j] = v
            t[j][i] = neg(v)
        return tuple(tuple(r) for r in t)

    @cached_property
    def sparse_table(self) -> tuple:
        """``[e_i, e_j]`` as tuples of nonzero ``(k, coefficient)`` pairs."""
        return tuple(
            tuple(tuple((k, s) for k, s in enumerate(v) if s) for v in row) for row in self.table
        )

    @cached_property
    def ad_basis(self) -> tuple:
        """``ad(e_i)`` as matrices whose column ``j`` is ``[e_i, e_j]``."""
        n = self.dim
        return tuple(
            tuple(tuple(self.table[i][j][k] for j in range(n)) for k in range(n))
            for i in range(n)
        )

    def basis_vector(self, i: int) -> Vector:
        F = self.field
        return tuple(F.one if k == i else F.zero for k in range(self.dim))

    @property
    def is_abelian(self) -> bool:
        return not self.sc

    def __repr__(self) -> str:
        name = f" {self.provenance}" if self.provenance else ""
        return f"LieAlgebra<{self.field}, dim {self.dim}{name}>"


def _dense(val, dim):
    if isinstance(val, Mapping):
        out = [0] * dim
        for k, x in val.items():
            out[k] = x
        return out
    if len(val) != dim:
        raise ValueError(f"bracket vector of length {len(val)}, expected {dim}")
    return val


def _negator(F: FieldSpec):
    if F.p is None:
        return lambda v: tuple(-x for x in v)
    return lambda v: tuple((-x) % F.p for x in v)


# --- elementwise operations ---------------------------------------------------------


def _check_len(L: LieAlgebra, *vs):
    for v in vs:
        if len(v) != L.dim:
            raise ValueError(f"vector of length {len(v)} in a {L.dim}-dimensional algebra")


def bracket(L: LieAlgebra, x: Vector, y: Vector) -> Vector:
    _check_len(L, x, y)
    F, n, t = L.field, L.dim, L.sparse_table
    acc = [F.zero] * n
    ys = [(j, b) for j, b in enumerate(y) if b]
    for i, a in enumerate(x):
        if not a:
            continue
        row = t[i]
        for j, b in ys:
            c = a * b
            for k, s in row[j]:
                acc[k] += c * s
    if F.p is not None:
        return tuple(v % F.p for v in acc)
    return tuple(acc)


def ad(L: LieAlgebra, x: Vector) -> Matrix:
    """Matrix of ``y -> [x, y]``; column ``j`` is ``[x, e_j]``."""
    _check_len(L, x)
    F, n = L.field, L.dim
    acc = [[F.zero] * n for _ in range(n)]
    for i, a in enumerate(x):
        if a:
            for r, row in enumerate(L.ad_basis[i]):
                out = acc[r]
                for c, s in enumerate(row):
                    if s:
                        out[c] += a * s
    if F.p is not None:
        return tuple(tuple(v % F.p for v in r) for r in acc)
    return tuple(tuple(r) for r in acc)


def validate(L: LieAlgebra) -> list[str]:
    """Jacobi and well-formedness violations; empty when ``L`` is a Lie algebra."""
    F, n = L.field, L.dim
    problems = []
    for i, j, v in L.sc:
        if not (0 <= i < j < n):
            problems.append(f"bracket index pair ({i}, {j}) is not i < j < {n}")
        if len(v) != n:
            problems.append(f"bracket ({i}, {j}) has {len(v)} coefficients, expected {n}")
        elif not all(F.is_canonical(x) for x in v):
            problems.append(f"bracket ({i}, {j}) has non-canonical coefficients for {F}")
    if problems:
        return problems
    e = [L.basis_vector(i) for i in range(n)]
    for i, j, k in itertools.combinations(range(n), 3):
        a = bracket(L, bracket(L, e[i], e[j]), e[k])
        b = bracket(L, bracket(L, e[j], e[k]), e[i])
        c = bracket(L, bracket(L, e[k], e[i]), e[j])
        total = lincomb((1, 1, 1), (a, b, c), F, n)
        if any(total):
            problems.append(
                f"Jacobi fails on ({L.labels[i]}, {L.labels[j]}, {L.labels[k]}): "
                + "(" + ", ".join(F.format(x) for x in total) + ")"
            )
    return problems


# --- subspace operations -------------------------------------------------------------


def full(L: LieAlgebra) -> Subspace:
    return Subspace.full(L.field, L.dim)


def zero(L: LieAlgebra) -> Subspace:
    return Subspace.zero(L.field, L.dim)


def span(L: LieAlgebra, vectors) -> Subspace:
    return Subspace.span(L.field, L.dim, [L.field.vector(v) for v in vectors])


def subspace_bracket(L: LieAlgebra, U: Subspace, V: Subspace) -> Subspace:
    return Subspace.span(
        L.field, L.dim, [bracket(L, u, v) for u in U.basis for v in V.basis]
    )


def _l_action(L: LieAlgebra, U: Subspace) -> list:
    """``[e_i, u]`` for every basis vector ``e_i`` and basis row ``u`` of ``U``."""
    F, n, t = L.field, L.dim, L.sparse_table
    out = []
    for row in t:
        for u in U.basis:
            acc = [F.zero] * n
            for j, b in enumerate(u):
                if b:
                    for k, s in row[j]:
                        acc[k] += b * s
            out.append(tuple(v % F.p for v in acc) if F.p is not None else tuple(acc))
    return out


def subalgebra_closure(L: LieAlgebra, U: Subspace) -> Subspace:
    W = U
    while True:
        nxt = W + subspace_bracket(L, W, W)
        if nxt.dim == W.dim:
            return W
        W = nxt


def ideal_closure(L: LieAlgebra, U: Subspace) -> Subspace:
    W = U
    while True:
        nxt = Subspace.span(L.field, L.dim, W.basis + tuple(_l_action(L, W)))
        if nxt.dim == W.dim:
            return W
        W = nxt


def is_subalgebra(L: LieAlgebra, U: Subspace) -> bool:
    b = U.basis
    for a in range(len(b)):
        for c in range(a + 1, len(b)):
            if not U.contains(bracket(L, b[a], b[c])):
                return False
    return True


def is_ideal(L: LieAlgebra, U: Subspace) -> bool:
    return all(U.contains(v) for v in _l_action(L, U))


def _stack(mats) -> list:
    return [row for m in mats for row in m]


def centre(L: LieAlgebra) -> Subspace:
    return kernel(_stack(L.ad_basis), L.field, L.dim)


def centralizer(L: LieAlgebra, U: Subspace) -> Subspace:
    if U.dim == 0:
        return full(L)
    return kernel(_stack(ad(L, u) for u in U.basis), L.field, L.dim)


def _pullback_rows(L: LieAlgebra, U: Subspace, mats) -> list:
    """Rows ``a^T m`` over annihilator vectors ``a`` of ``U``: ``m x in U`` iff all vanish."""
    F = L.field
    ann = U.annihilator().basis
    rows = []
    for m in mats:
        for a in ann:
            rows.append(lincomb(a, m, F, L.dim))
    return rows


def normalizer(L: LieAlgebra, U: Subspace) -> Subspace:
    rows = _pullback_rows(L, U, [ad(L, u) for u in U.basis])
    return kernel(rows, L.field, L.dim) if rows else full(L)


def core(L: LieAlgebra, B: Subspace) -> Subspace:
    """Largest ideal of ``L`` inside the subspace ``B``."""
    X = B
    while X.dim:
        rows = _pullback_rows(L, X, L.ad_basis)
        nxt = X & kernel(rows, L.field, L.dim) if rows else X
        if nxt.dim == X.dim:
            return X
        X = nxt
    return X


# --- series ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesReport:
    kind: str
    terms: tuple
    stabilized: bool = True

    @property
    def dims(self) -> tuple:
        return tuple(t.dim for t in self.terms)

    @property
    def last(self) -> Subspace:
        return self.terms[-1]


def series(L: LieAlgebra, kind: str = "derived") -> SeriesReport:
    """Derived or lower central series, stopping at the first repeated term."""
    if kind not in ("derived", "lower_central"):
        raise ValueError(f"unknown series kind {kind!r}")
    X = full(L)
    terms = [X]
    while X.dim:
        if kind == "derived":
            nxt = subspace_bracket(L, X, X)
        else:
            nxt = subspace_bracket(L, full(L), X)
        if nxt.dim == X.dim:
            break
        terms.append(nxt)
        X = nxt
    return SeriesReport(kind, tuple(terms))


def derived_algebra(L: LieAlgebra) -> Subspace:
    return subspace_bracket(L, full(L), full(L))


@lru_cache(maxsize=4096)
def is_solvable(L: LieAlgebra) -> bool:
    return series(L, "derived").last.dim == 0


@lru_cache(maxsize=4096)
def is_nilpotent(L: LieAlgebra) -> bool:
    return series(L, "lower_central").last.dim == 0


# --- Killing form, radical ------------------------------------------------------------------


def killing_form(L: LieAlgebra) -> Matrix:
    F, n = L.field, L.dim
    ads = L.ad_basis
    return tuple(
        tuple(trace(matmul(ads[i], ads[j], F), F) for j in range(n)) for i in range(n)
    )


def radical(L: LieAlgebra) -> Subspace:
    """Largest solvable ideal.

    Characteristic 0 uses the Killing-orthogonal of ``[L, L]``; characteristic
    ``p`` peels off abelian minimal ideals and recurses on the quotient.
    """
    F = L.field
    if is_solvable(L):
        return full(L)
    if F.characteristic == 0:
        K = killing_form(L)
        D = derived_algebra(L)
        rows = [tuple(sum(d[a] * K[a][b] for a in range(L.dim)) for b in range(L.dim)) for d in D.basis]
        return kernel(rows, F, L.dim)
    for tagged in minimal_ideals(L):
        A = tagged.ideal
        if subspace_bracket(L, A, A).dim == 0:
            Q, proj = quotient(L, A)
            return proj.preimage(radical(Q))
    return zero(L)


# --- quotients and subalgebras -----------------------------------------------------------


@dataclass(frozen=True)
class Projection:
    """The canonical map ``L -> L/B`` onto the non-pivot coordinates of ``B``."""

    source: LieAlgebra
    kernel: Subspace
    free: tuple

    def image(self, v: Vector) -> Vector:
        w = self.kernel.reduce(v)
        return tuple(w[c] for c in self.free)

    def lift(self, w: Vector) -> Vector:
        F = self.source.field
        v = [F.zero] * self.source.dim
        for c, x in zip(self.free, w):
            v[c] = x
        return tuple(v)

    def image_subspace(self, U: Subspace) -> Subspace:
        return Subspace.span(
            self.source.field, len(self.free), [self.image(u) for u in U.basis]
        )

    def preimage(self, W: Subspace) -> Subspace:
        return Subspace.span(
            self.source.field,
            self.source.dim,
            [self.lift(w) for w in W.basis] + list(self.kernel.basis),
        )


def quotient(L: LieAlgebra, B: Subspace) -> tuple[LieAlgebra, Projection]:
    if not is_ideal(L, B):
        raise ValueError("quotient by a subspace that is not an ideal")
    free = tuple(c for c in range(L.dim) if c not in B.pivots)
    proj = Projection(L, B, free)
    if B.dim == 0:
        return L, proj
    br = {}
    for a in range(len(free)):
        for b in range(a + 1, len(free)):
            v = proj.image(L.table[free[a]][free[b]])
            if any(v):
                br[(a, b)] = v
    labels = [L.labels[c] for c in free]
    Q = LieAlgebra.from_brackets(L.field, len(free), br, labels, f"quotient of {L.provenance}".strip())
    return Q, proj


def restrict(L: LieAlgebra, S: Subspace) -> LieAlgebra:
    """``S`` as a Lie algebra in its RREF basis."""
    if not is_subalgebra(L, S):
        raise ValueError("restriction to a subspace that is not a subalgebra")
    b = S.basis
    br = {}
    for i in range(len(b)):
        for j in range(i + 1, len(b)):
            v = S.coords(bracket(L, b[i], b[j]))
            if any(v):
                br[(i, j)] = v
    labels = []
    for i, row in enumerate(b):
        nz = [k for k, x in enumerate(row) if x]
        labels.append(L.labels[nz[0]] if len(nz) == 1 and row[nz[0]] == 1 else f"s{i}")
    return LieAlgebra.from_brackets(L.field, len(b), br, labels)


def section(L: LieAlgebra, A: Subspace, B: Subspace) -> LieAlgebra:
    """The algebra ``A/B`` for a subalgebra ``A`` containing an ideal ``B`` of ``A``."""
    S = restrict(L, A)
    Bs = Subspace.span(L.field, A.dim, [A.coords(b) for b in B.basis])
    return quotient(S, Bs)[0]


# --- centroid and simplicity ----------------------------------------------------------------


def centroid(L: LieAlgebra) -> list[Matrix]:
    """Basis of ``{T : T ad(x) = ad(x) T for all x}`` as ``n x n`` matrices."""
    F, n = L.field, L.dim
    rows = []
    for A in L.ad_basis:
        for a in range(n):
            for b in range(n):
                row = [F.zero] * (n * n)
                for k in range(n):
                    row[a * n + k] += A[k][b]
                    row[k * n + b] -= A[a][k]
                if F.p is not None:
                    row = [x % F.p for x in row]
                rows.append(row)
    K = kernel(rows, F, n * n) if rows else Subspace.full(F, n * n)
    return [tuple(tuple(v[r * n : (r + 1) * n]) for r in range(n)) for v in K.basis]


def derivations(L: LieAlgebra) -> list[Matrix]:
    """Basis of ``Der(L)``: maps ``D`` with ``D[x,y] = [Dx,y] + [x,Dy]``.

    Column ``j`` of each matrix is ``D e_j``.
    """
    F, n = L.field, L.dim
    t = L.table
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            for r in range(n):
                row = [F.zero] * (n * n)
                for k in range(n):
                    row[r * n + k] += t[a][b][k]
                for s_ in range(n):
                    row[s_ * n + a] -= t[s_][b][r]
                    row[s_ * n + b] -= t[a][s_][r]
                if F.p is not None:
                    row = [x % F.p for x in row]
                rows.append(row)
    K = kernel(rows, F, n * n) if rows else Subspace.full(F, n * n)
    return [tuple(tuple(v[r * n : (r + 1) * n]) for r in range(n)) for v in K.basis]


def minimal_polynomial(m: Matrix, F: FieldSpec) -> tuple:
    """Monic minimal polynomial of ``m``, coefficients from the constant term up."""
    n = len(m)
    powers = [identity(n, F)]
    flat = [tuple(x for r in powers[0] for x in r)]
    while True:
        nxt = matmul(powers[-1], m, F)
        v = tuple(x for r in nxt for x in r)
        red, r, piv = rref(flat + [v], F)
        if r == len(flat):
            coeffs = solve_left_membership(v, flat, F)
            neg = [(-c) if F.p is None else (-c) % F.p for c in coeffs]
            return tuple(neg) + (F.one,)
        powers.append(nxt)
        flat.append(v)


def _irreducible_over_q(coeffs: tuple) -> bool:
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
    return poly.is_irreducible


def centroid_is_field(L: LieAlgebra) -> bool | None:
    """True when the centroid is provably a field, None when undecided."""
    C = centroid(L)
    d = len(C)
    if d == 1:
        return True
    if L.field.is_finite:
        return None
    cands = list(C) + [
        tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(C[i], C[j]))
        for i in range(d)
        for j in range(i + 1, d)
    ]
    for c in cands:
        mp = minimal_polynomial(c, L.field)
        if len(mp) - 1 == d and _irreducible_over_q(mp):
            return True
    return None


def certify_simple(L: LieAlgebra) -> bool | None:
    """True if ``L`` is proven simple, False if proven not, None if undecided.

    Over GF(p) the ideal lattice is searched exhaustively.  Over the rationals
    a nondegenerate Killing form plus a centroid that is a field proves
    simplicity; a proper nonzero ideal found by closure disproves it.
    """
    if L.dim == 0 or L.is_abelian:
        return False
    F = L.field
    if F.is_finite:
        mins = minimal_ideals(L)
        return len(mins) == 1 and mins[0].ideal.dim == L.dim
    for i in range(L.dim):
        I = ideal_closure(L, Subspace.span(F, L.dim, [L.basis_vector(i)]))
        if I.dim < L.dim:
            return False
    if rank(killing_form(L), F) != L.dim:
        return None
    return True if centroid_is_field(L) else None


# --- minimal ideals and chief series ----------------------------------------------------------


class TaggedIdeal(NamedTuple):
    ideal: Subspace
    verified: bool


def _q_candidate_vectors(W: Subspace, seed: int = 0, extra: int = 8):
    b = list(W.basis)
    out = list(b)
    for u, v in itertools.combinations(b, 2):
        out.append(tuple(x + y for x, y in zip(u, v)))
        out.append(tuple(x - y for x, y in zip(u, v)))
    rng = random.Random(seed)
    for _ in range(extra if len(b) > 1 else 0):
        cs = [Fraction(rng.randint(-3, 3)) for _ in b]
        if any(cs):
            out.append(lincomb(cs, b, W.field, W.ambient_dim))
    return out


def minimal_ideals(L: LieAlgebra, within: Subspace | None = None) -> list[TaggedIdeal]:
    """Minimal ideals of ``L`` (contained in ``within`` when given).

    Over GF(p) every line of ``within`` is closed to an ideal and the
    inclusion-minimal closures are exactly the minimal ideals.  Over the
    rationals the candidates come from basis vectors, their sums and
    differences and a few seeded combinations; a result is tagged verified
    only when it is one-dimensional or simple as an algebra.
    """
    F = L.field
    W = full(L) if within is None else within
    if W.dim == 0:
        return []
    if F.is_finite:
        vecs = (
            lincomb(c, W.basis, F, L.dim) for c in projective_points(W.dim, F)
        )
    else:
        vecs = (v for v in _q_candidate_vectors(W) if any(v))
    cands: dict = {}
    for v in vecs:
        I = ideal_closure(L, Subspace.span(F, L.dim, [v]))
        cands.setdefault(I.key(), I)
    ideals = sorted(cands.values(), key=lambda I: (I.dim, I.key()))
    minimal = [I for I in ideals if not any(J < I for J in ideals if J.dim < I.dim)]
    if F.is_finite:
        return [TaggedIdeal(I, True) for I in minimal]
    out = []
    for I in minimal:
        ok = I.dim == 1 or certify_simple(restrict(L, I)) is True
        out.append(TaggedIdeal(I, ok))
    return out


@dataclass(frozen=True)
class ChiefFactor:
    A: Subspace
    B: Subspace
    quotient: LieAlgebra
    abelian: bool

    @property
    def dim(self) -> int:
        return self.A.dim - self.B.dim


def chief_factor(L: LieAlgebra, A: Subspace, B: Subspace) -> ChiefFactor:
    Q = section(L, A, B)
    return ChiefFactor(A, B, Q, Q.is_abelian)


def chief_series(L: LieAlgebra) -> list[ChiefFactor]:
    factors = []
    I = zero(L)
    while I.dim < L.dim:
        Q, proj = quotient(L, I)
        mins = minimal_ideals(Q)
        good = [t for t in mins if t.verified]
        if not good:
            raise CapabilityError(
                f"no certified minimal ideal of the {Q.dim}-dimensional quotient "
                f"by the {I.dim}-dimensional term; candidates were "
                f"{[t.ideal.dim for t in mins]}-dimensional but unconfirmed"
            )
        nxt = proj.preimage(good[0].ideal)
        factors.append(chief_factor(L, nxt, I))
        I = nxt
    return factors


# --- Fitting decomposition and nil subalgebras ------------------------------------------------


def fitting_decomposition(L: LieAlgebra, a: Vector) -> tuple[Subspace, Subspace]:
    F, n = L.field, L.dim
    A = ad(L, a)
    P = identity(n, F)
    for _ in range(n):
        P = matmul(P, A, F)
    return kernel(P, F, n), image(P, F, n)


def _flat(m: Matrix) -> tuple:
    return tuple(x for r in m for x in r)


def _unflat(v: tuple, n: int) -> Matrix:
    return tuple(tuple(v[r * n : (r + 1) * n]) for r in range(n))


def envelope_is_nilpotent(mats: Sequence[Matrix], F: FieldSpec, n: int) -> bool:
    """Whether the associative algebra generated by ``mats`` is nilpotent."""
    if n == 0:
        return True
    E = Subspace.span(F, n * n, [_flat(m) for m in mats])
    while True:
        gens = [_unflat(v, n) for v in E.basis]
        prods = [_flat(matmul(a, b, F)) for a in gens for b in gens]
        nxt = Subspace.span(F, n * n, list(E.basis) + prods)
        if nxt.dim == E.dim:
            break
        E = nxt
    gens = [_unflat(v, n) for v in E.basis]
    P = E
    for _ in range(n + 1):
        if P.dim == 0:
            return True
        nxt = Subspace.span(
            F, n * n, [_flat(matmul(_unflat(p, n), g, F)) for p in P.basis for g in gens]
        )
        if nxt.dim == P.dim:
            return False
        P = nxt
    return P.dim == 0


def is_nil_subalgebra(L: LieAlgebra, U: Subspace) -> bool:
    """Whether ``ad u`` is nilpotent on ``L`` for every ``u`` in the subalgebra ``U``.

    ``ad U`` is closed under commutators, so by Jacobson's theorem on weakly
    closed sets this is the same as nilpotency of its associative envelope.
    """
    if not is_subalgebra(L, U):
        raise ValueError("nil test needs a subalgebra")
    return envelope_is_nilpotent([ad(L, u) for u in U.basis], L.field, L.dim)


def nilpotency_index(m: Matrix, F: FieldSpec) -> int:
    """Least ``k`` with ``m^k = 0``, or ``-1`` when ``m`` is not nilpotent."""
    n = len(m)
    P = identity(n, F)
    for k in range(n + 1):
        if not any(any(r) for r in P):
            return k
        P = matmul(P, m, F)
    return -1


# --- fingerprints and isomorphism ------------------------------------------------------------


class Fingerprint(NamedTuple):
    dim: int
    derived: tuple
    lower_central: tuple
    centre: int
    killing_rank: int
    derived_centralizer: int
    ad_profile: tuple


def jordan_profile(m: Matrix, F: FieldSpec) -> tuple:
    """Ranks of ``(m - c)^k`` for ``k = 1..n`` and every scalar ``c`` of a finite field.

    Each rank sequence stops once it repeats.
    """
    n = len(m)
    out = []
    for c in F.elements():
        shifted = tuple(
            tuple((x - c) % F.p if i == j else x for j, x in enumerate(r)) for i, r in enumerate(m)
        )
        rk = rank(shifted, F)
        ranks = [rk]
        P = shifted
        while 0 < rk < n and len(ranks) < n:
            P = matmul(P, shifted, F)
            rk = rank(P, F)
            if rk == ranks[-1]:
                break
            ranks.append(rk)
        out.append(tuple(ranks))
    return tuple(out)


def _ad_profile_tally(L: LieAlgebra) -> tuple:
    """Tally of Jordan profiles of ``ad x`` over all nonzero ``x``.

    ``ad(a x) - c = a (ad x - c/a)``, so each line is profiled once and its
    scalar multiples are read off by permuting the scalars.
    """
    F = L.field
    p = F.p
    tally: Counter = Counter()
    for v in projective_points(L.dim, F):
        prof = jordan_profile(ad(L, v), F)
        for a in range(1, p):
            inv = pow(a, -1, p)
            tally[tuple(prof[c * inv % p] for c in range(p))] += 1
    return tuple(sorted(tally.items()))


@lru_cache(maxsize=8192)
def fingerprint(L: LieAlgebra) -> Fingerprint:
    """Isomorphism invariants.

    Over GF(p) the last entry tallies the Jordan profile of ``ad x`` over
    every nonzero ``x``, which is basis-independent and subsumes the
    ad-nilpotency index; over the rationals it is left empty.
    """
    F = L.field
    hist: tuple = ()
    if F.is_finite and L.dim:
        hist = _ad_profile_tally(L)
    D = derived_algebra(L)
    return Fingerprint(
        L.dim,
        series(L, "derived").dims,
        series(L, "lower_central").dims,
        centre(L).dim,
        rank(killing_form(L), F) if L.dim else 0,
        centralizer(L, D).dim,
        hist,
    )


def exhaustive_iso_limit(F: FieldSpec) -> int:
    if not F.is_finite:
        return -1
    return 4 if F.p == 2 else 3


def is_isomorphic(L1: LieAlgebra, L2: LieAlgebra) -> Verdict:
    if L1.field != L2.field:
        raise ValueError("isomorphism test across different fields")
    if L1.dim != L2.dim:
        return Verdict.NO
    if L1.sc == L2.sc:
        return Verdict.YES
    if L1.is_abelian and L2.is_abelian:
        return Verdict.YES
    if fingerprint(L1) != fingerprint(L2):
        return Verdict.NO
    if L1.dim > exhaustive_iso_limit(L1.field):
        return Verdict.UNKNOWN
    return Verdict.YES if find_isomorphism(L1, L2) is not None else Verdict.NO


def find_isomorphism(L1: LieAlgebra, L2: LieAlgebra):
    """Images of the basis of ``L1`` in ``L2`` defining an isomorphism, or None.

    Backtracking over linearly independent images over a finite field; the
    bracket on ``e_i, e_j`` is checked as soon as every basis vector it
    involves has an image.
    """
    F, n = L1.field, L1.dim
    vecs = [v for v in itertools.product(F.elements(), repeat=n) if any(v)]
    checks: list[list] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = L1.table[i][j]
            top = max([j] + [k for k, x in enumerate(w) if x])
            checks[top].append((i, j, w))
    imgs: list = []

    def rec(t):
        if t == n:
            return True
        for v in vecs:
            if rank(imgs + [v], F) != t + 1:
                continue
            imgs.append(v)
            ok = True
            for i, j, w in checks[t]:
                lhs = bracket(L2, imgs[i], imgs[j])
                rhs = lincomb(w, imgs, F, n) if any(w) else (F.zero,) * n
                if lhs != rhs:
                    ok = False
                    break
            if ok and rec(t + 1):
                return True
            imgs.pop()
        return False

    return tuple(imgs) if rec(0) else None
