"""Maximal subalgebras, the catalog of named algebras, and the corpus generator."""

from __future__ import annotations

import itertools
import logging
import random
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .exactla import (
    DEFAULT_BUDGET,
    GF,
    QQ,
    FieldSpec,
    InfiniteFieldError,
    Subspace,
    enumerate_subspaces,
    projective_points,
    kernel,
    lincomb,
    matmul,
    rref,
)
from .liealg import (
    LieAlgebra,
    Projection,
    Verdict,
    bracket,
    certify_simple,
    derivations,
    fingerprint,
    full,
    ideal_closure,
    is_nilpotent,
    is_solvable,
    is_subalgebra,
    quotient,
    radical,
    restrict,
    subalgebra_closure,
    validate,
)

log = logging.getLogger(__name__)


# --- maximal subalgebras -----------------------------------------------------------------


def maximal_subalgebras(L: LieAlgebra, budget: int = DEFAULT_BUDGET) -> list[Subspace]:
    """All maximal subalgebras of ``L`` over a finite field, by exhaustion.

    Subspaces are scanned from codimension 1 downwards; a subalgebra is kept
    when it lies in none of the maximal subalgebras already found, which
    suffices because every proper subalgebra sits inside a maximal one.
    """
    F, n = L.field, L.dim
    if not F.is_finite:
        raise InfiniteFieldError("exhaustive maximal subalgebras need a finite field")
    found: list[Subspace] = []
    for d in range(n - 1, -1, -1):
        for S in enumerate_subspaces(n, F, d, budget):
            if any(S.le(M) for M in found):
                continue
            if is_subalgebra(L, S):
                found.append(S)
    return sorted(found, key=lambda S: (S.dim, S.key()))


def _vector_projection(L: LieAlgebra, M: Subspace) -> Projection:
    free = tuple(c for c in range(L.dim) if c not in M.pivots)
    return Projection(L, M, free)


@dataclass(frozen=True)
class MaximalityCertificate:
    verdict: Verdict
    reason: str
    witness: Subspace | None = None


def is_maximal(L: LieAlgebra, M: Subspace, budget: int = DEFAULT_BUDGET) -> Verdict:
    return certify_maximal(L, M, budget).verdict


def certify_maximal(
    L: LieAlgebra, M: Subspace, budget: int = DEFAULT_BUDGET
) -> MaximalityCertificate:
    """Decide whether the proper subalgebra ``M`` is maximal in ``L``.

    Over a finite field every subspace between ``M`` and ``L`` is tried.  Over
    the rationals, closures of ``M`` plus single vectors can only refute
    maximality; a proof comes from an element of ``M`` acting on ``L/M`` with
    squarefree characteristic polynomial, whose invariant subspaces (sums of
    primary components) are then the only candidates for ``K/M``.
    """
    F, n = L.field, L.dim
    if M.dim >= n or not is_subalgebra(L, M):
        raise ValueError("maximality is only defined for proper subalgebras")
    if M.dim == n - 1:
        return MaximalityCertificate(Verdict.YES, "codimension 1")
    proj = _vector_projection(L, M)
    codim = n - M.dim
    if F.is_finite:
        for d in range(1, codim):
            for W in enumerate_subspaces(codim, F, d, budget):
                K = proj.preimage(W)
                if is_subalgebra(L, K):
                    return MaximalityCertificate(Verdict.NO, "intermediate subalgebra", K)
        return MaximalityCertificate(Verdict.YES, "exhaustive search over L/M")
    for v in _extension_vectors(L, M):
        K = subalgebra_closure(L, M + Subspace.span(F, n, [v]))
        if K.dim < n:
            return MaximalityCertificate(Verdict.NO, "one-step extension is proper", K)
    for T in _module_operators(L, M, proj):
        charpoly = sympy.Matrix(T).charpoly()
        if sympy.gcd(charpoly.as_expr(), charpoly.diff().as_expr()).as_poly(charpoly.gen).degree() > 0:
            continue
        comps = []
        for f, _ in sympy.factor_list(charpoly.as_expr(), charpoly.gen)[1]:
            comps.append(_poly_kernel(T, sympy.Poly(f, charpoly.gen), F))
        for r in range(1, len(comps)):
            for subset in itertools.combinations(comps, r):
                W = Subspace.span(F, codim, [b for c in subset for b in c.basis])
                K = proj.preimage(W)
                if is_subalgebra(L, K):
                    return MaximalityCertificate(Verdict.NO, "invariant subspace closes", K)
        return MaximalityCertificate(
            Verdict.YES, "no invariant subspace of a squarefree operator lifts to a subalgebra"
        )
    return MaximalityCertificate(Verdict.UNKNOWN, "no squarefree operator found on L/M")


def one_step_extensions(L: LieAlgebra, M: Subspace) -> list[Subspace]:
    """Closures of ``M + span(v)`` over the candidate vectors outside ``M``."""
    F, n = L.field, L.dim
    return [subalgebra_closure(L, M + Subspace.span(F, n, [v])) for v in _extension_vectors(L, M)]


def _extension_vectors(L: LieAlgebra, M: Subspace, extra: int = 6):
    F, n = L.field, L.dim
    basis = [L.basis_vector(i) for i in range(n)]
    outside = [v for v in basis if not M.contains(v)]
    cands = list(outside)
    for u, v in itertools.combinations(basis, 2):
        w = lincomb((1, 1), (u, v), F, n)
        if not M.contains(w):
            cands.append(w)
    rng = random.Random(n)
    for _ in range(extra):
        w = lincomb([F(rng.randint(-3, 3)) for _ in basis], basis, F, n)
        if any(w) and not M.contains(w):
            cands.append(w)
    return cands


def _module_operators(L, M, proj, extra: int = 6):
    """Matrices of ``ad m`` on ``L/M`` for a few elements ``m`` of ``M``."""
    F = L.field
    elems = list(M.basis)
    for u, v in itertools.combinations(M.basis, 2):
        elems.append(lincomb((1, 1), (u, v), F, L.dim))
        elems.append(lincomb((1, 2), (u, v), F, L.dim))
    rng = random.Random(L.dim)
    for _ in range(extra):
        elems.append(lincomb([F(rng.randint(-4, 4)) for _ in M.basis], M.basis, F, L.dim))
    for m in elems:
        if not any(m):
            continue
        cols = [proj.image(bracket(L, m, proj.lift(w))) for w in _unit_vectors(len(proj.free), F)]
        yield [[sympy.Rational(cols[c][r].numerator, cols[c][r].denominator) for c in range(len(cols))] for r in range(len(cols))]


def _unit_vectors(k: int, F: FieldSpec):
    return [tuple(F.one if i == j else F.zero for j in range(k)) for i in range(k)]


def _poly_kernel(T, f: sympy.Poly, F: FieldSpec) -> Subspace:
    """Kernel of ``f(T)`` for a rational matrix ``T`` (nested lists of sympy rationals)."""
    k = len(T)
    Tm = sympy.Matrix(T)
    acc = sympy.zeros(k, k)
    P = sympy.eye(k)
    for c in reversed(f.all_coeffs()):
        acc += c * P
        P = P * Tm
    rows = [[Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in acc.row(i)] for i in range(k)]
    return kernel(rows, F, k)


# --- catalog ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: LieAlgebra
    declared_maximals: tuple = ()
    declared_properties: frozenset = frozenset()
    citation: str = ""
    levi_components: tuple = ()


PROPERTIES = {"simple", "solvable", "nilpotent", "semisimple", "minimal_nonabelian"}


def _entry(name, L, maximals=(), props=(), citation="", levi=()):
    maxs = tuple(Subspace.coordinate(L.field, L.dim, m) if isinstance(m, tuple) else m for m in maximals)
    e = CatalogEntry(name, L, maxs, frozenset(props), citation, tuple(levi))
    problems = check_entry(e)
    if problems:
        raise ValueError(f"catalog entry {name} failed its checks: {problems}")
    return e


def check_entry(e: CatalogEntry) -> list[str]:
    """Re-derive what can be decided about a catalog entry's declarations."""
    L = e.algebra
    problems = list(validate(L))
    for M in e.declared_maximals:
        if M.dim >= L.dim or not is_subalgebra(L, M):
            problems.append(f"declared maximal {M} is not a proper subalgebra")
        elif L.dim <= 6 and is_maximal(L, M) == Verdict.NO:
            problems.append(f"declared maximal {M} is not maximal")
    unknown = e.declared_properties - PROPERTIES
    if unknown:
        problems.append(f"unknown properties {sorted(unknown)}")
    props = e.declared_properties
    if "solvable" in props and not is_solvable(L):
        problems.append("declared solvable but is not")
    if "nilpotent" in props and not is_nilpotent(L):
        problems.append("declared nilpotent but is not")
    if "semisimple" in props and radical(L).dim:
        problems.append("declared semisimple but has a nonzero radical")
    if "simple" in props and certify_simple(L) is False:
        problems.append("declared simple but has a proper ideal")
    if "minimal_nonabelian" in props:
        maxs = maximal_subalgebras(L) if L.field.is_finite else e.declared_maximals
        for M in maxs:
            if any(any(bracket(L, u, v)) for u in M.basis for v in M.basis):
                problems.append(f"maximal {M} is nonabelian")
    return problems


def abelian(n: int, F: FieldSpec = QQ) -> LieAlgebra:
    return LieAlgebra(F, n, (), tuple(f"a{i}" for i in range(n)), f"abelian({n})")


def r2(F: FieldSpec = QQ) -> LieAlgebra:
    return LieAlgebra.from_brackets(F, 2, {(0, 1): (1, 0)}, ("x", "y"), "r2")


def heisenberg(F: FieldSpec = QQ) -> LieAlgebra:
    return LieAlgebra.from_brackets(F, 3, {(0, 1): (0, 0, 1)}, ("x", "y", "z"), "heisenberg")


def sl2(F: FieldSpec = QQ) -> LieAlgebra:
    return LieAlgebra.from_brackets(
        F, 3, {(0, 2): (0, 1, 0), (1, 0): (2, 0, 0), (1, 2): (0, 0, -2)}, ("e", "h", "f"), "sl2"
    )


def upper_triangular(n: int, F: FieldSpec = QQ) -> LieAlgebra:
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    mats = []
    for i, j in idx:
        m = [[0] * n for _ in range(n)]
        m[i][j] = 1
        mats.append(m)
    labels = [f"E{i + 1}{j + 1}" for i, j in idx]
    return matrix_algebra(F, mats, labels, f"upper_triangular({n})")


def direct_sum(*algebras: LieAlgebra) -> LieAlgebra:
    F = algebras[0].field
    if any(A.field != F for A in algebras):
        raise ValueError("direct sum across different fields")
    n = sum(A.dim for A in algebras)
    br = {}
    labels = []
    off = 0
    for t, A in enumerate(algebras):
        for i, j, v in A.sc:
            w = [F.zero] * n
            w[off : off + A.dim] = v
            br[(off + i, off + j)] = w
        labels += [f"{lab}_{t + 1}" for lab in A.labels]
        off += A.dim
    name = "direct_sum(" + ",".join(A.provenance or "?" for A in algebras) + ")"
    return LieAlgebra.from_brackets(F, n, br, labels, name)


def matrix_algebra(F: FieldSpec, mats, labels=None, provenance="") -> LieAlgebra:
    """Structure constants of the span of ``mats``, which must be a basis closed under commutators."""
    k = len(mats)
    s = len(mats[0])
    flat = [tuple(F(x) for row in m for x in row) for m in mats]
    mats = [tuple(tuple(F(x) for x in row) for row in m) for m in mats]
    basis = Subspace.span(F, s * s, flat)
    if basis.dim != k:
        raise ValueError("matrices are linearly dependent")
    # coordinates relative to ``flat``: solve once through the RREF basis
    to_rref = [basis.coords(v) for v in flat]
    inv = _invert(to_rref, F)
    br = {}
    for a in range(k):
        for b in range(a + 1, k):
            c = _commutator(mats[a], mats[b], F)
            v = tuple(x for row in c for x in row)
            if not basis.contains(v):
                raise ValueError("matrices are not closed under commutators")
            r = basis.coords(v)
            br[(a, b)] = lincomb(r, inv, F, k)
    return LieAlgebra.from_brackets(F, k, br, labels, provenance)


def _invert(m, F: FieldSpec):
    k = len(m)
    aug = [list(row) + [F.one if i == j else F.zero for j in range(k)] for i, row in enumerate(m)]
    red, r, piv = rref(aug, F, 2 * k)
    if r < k or piv[-1] >= k:
        raise ValueError("singular matrix")
    return [tuple(row[k:]) for row in red]


def _commutator(a, b, F):
    ab = matmul(a, b, F)
    ba = matmul(b, a, F)
    if F.p is None:
        return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(ab, ba))
    return tuple(tuple((x - y) % F.p for x, y in zip(r, s)) for r, s in zip(ab, ba))


def gejn_matrices(block: int) -> tuple[list, list]:
    """Gejn's block matrices ``f_i A^j`` (``i = 1..3``, ``j < block``) with labels.

    ``A`` is the ``block x block`` matrix with top-right entry 2 and ones on
    the subdiagonal, so ``A^block = 2``.  For ``block = 2`` the six matrices
    are exactly ``f_1, f_2, f_3`` and ``g_i = f_i A``.
    """
    k = block
    A = [[Fraction(0)] * k for _ in range(k)]
    A[0][k - 1] = Fraction(2)
    for i in range(1, k):
        A[i][i - 1] = Fraction(1)
    E = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    Z = [[Fraction(0)] * k for _ in range(k)]

    def neg(X):
        return [[-x for x in r] for r in X]

    def blocks(rows):
        return [[x for blk in brow for x in blk[r]] for brow in rows for r in range(k)]

    f = [
        [[Z, Z, Z], [Z, Z, neg(E)], [Z, E, Z]],
        [[Z, Z, A], [Z, Z, Z], [neg(E), Z, Z]],
        [[Z, neg(A), Z], [E, Z, Z], [Z, Z, Z]],
    ]
    scale = [[Fraction(int(i == j)) for j in range(3 * k)] for i in range(3 * k)]
    bigA = blocks([[A, Z, Z], [Z, A, Z], [Z, Z, A]])
    mats, labels = [], []
    for j in range(k):
        for i in range(3):
            mats.append(matmul(tuple(map(tuple, blocks(f[i]))), tuple(map(tuple, scale)), QQ))
            if block == 2:
                labels.append(("f", "g")[j] + str(i + 1))
            else:
                labels.append(f"f{i + 1}" + (f"A{j}" if j else ""))
        scale = matmul(tuple(map(tuple, scale)), tuple(map(tuple, bigA)), QQ)
    return mats, labels


def gejn(k: int = 1) -> LieAlgebra:
    """The ``k``-th Gejn algebra over the rationals, of dimension ``3(k+1)``.

    ``gejn(1)`` is the six-dimensional algebra spanned by ``f_i, g_i``;
    ``gejn(0)`` is the three-dimensional member with scalar blocks.
    """
    if k < 0:
        raise ValueError("gejn(k) needs k >= 0")
    mats, labels = gejn_matrices(k + 1)
    return matrix_algebra(QQ, mats, labels, f"gejn({k})")


def gejn_maximals(k: int) -> list[Subspace]:
    b = k + 1
    return [Subspace.coordinate(QQ, 3 * b, [i + 3 * j for j in range(b)]) for i in range(3)]


_NAME_RE = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\((.*)\))?\s*$")


def catalog(name: str, *params, field: FieldSpec = QQ) -> CatalogEntry:
    """Look up a named algebra.

    Names: ``abelian(n)``, ``r2``, ``heisenberg``, ``upper_triangular(n)``,
    ``sl2``, ``gejn(k)`` (rationals only) and ``direct_sum(a, b, ...)``.
    ``name`` may carry its parameters inline, e.g. ``"direct_sum(sl2,r2)"``.
    """
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"bad catalog name {name!r}")
    base, inline = m.group(1), m.group(2)
    if inline is not None and not params:
        params = tuple(_split_params(inline))
    F = field
    if base == "abelian":
        (n,) = _ints(params, 1, base)
        if n < 0:
            raise ValueError("abelian(n) needs n >= 0")
        L = abelian(n, F)
        maxs = [tuple(j for j in range(n) if j != i) for i in range(n)]
        return _entry(f"abelian({n})", L, maxs, {"solvable", "nilpotent"}, "every subspace is an ideal")
    if base == "r2":
        _ints(params, 0, base)
        return _entry("r2", r2(F), [(0,), (1,)], {"solvable"}, "[x, y] = x")
    if base == "heisenberg":
        _ints(params, 0, base)
        return _entry("heisenberg", heisenberg(F), [(0, 2), (1, 2)], {"solvable", "nilpotent"}, "[x, y] = z")
    if base == "upper_triangular":
        (n,) = _ints(params, 1, base)
        if n < 1:
            raise ValueError("upper_triangular(n) needs n >= 1")
        L = upper_triangular(n, F)
        maxs = [tuple(range(1, L.dim))] if L.dim > 1 else []
        return _entry(f"upper_triangular({n})", L, maxs, {"solvable"}, "upper triangular matrices")
    if base == "sl2":
        _ints(params, 0, base)
        L = sl2(F)
        props = {"simple", "semisimple"} if F.characteristic not in (2,) else {"solvable", "nilpotent"}
        maxs = [(0, 1), (1, 2)]
        return _entry("sl2", L, maxs, props, "[e,f]=h, [h,e]=2e, [h,f]=-2f", levi=("sl2",) if F.characteristic == 0 else ())
    if base == "gejn":
        (k,) = _ints(params, 1, base) if params else (1,)
        if F != QQ:
            raise ValueError("gejn(k) is defined over the rationals")
        L = gejn(k)
        return _entry(
            f"gejn({k})",
            L,
            gejn_maximals(k),
            {"simple", "semisimple", "minimal_nonabelian"},
            "Gejn's block-matrix construction with A^b = 2",
            levi=("minimal_nonabelian",),
        )
    if base == "direct_sum":
        parts = [p if isinstance(p, CatalogEntry) else catalog(p, field=F) for p in params]
        if len(parts) < 2:
            raise ValueError("direct_sum needs at least two summands")
        L = direct_sum(*[p.algebra for p in parts])
        L = LieAlgebra(L.field, L.dim, L.sc, L.labels, "direct_sum(" + ",".join(p.name for p in parts) + ")")
        props = set()
        if all("solvable" in p.declared_properties for p in parts):
            props.add("solvable")
        if all("nilpotent" in p.declared_properties for p in parts):
            props.add("nilpotent")
        if all("semisimple" in p.declared_properties for p in parts):
            props.add("semisimple")
        maxs = []
        off = 0
        offsets = []
        for p in parts:
            offsets.append(off)
            off += p.algebra.dim
        for t, p in enumerate(parts):
            for M in p.declared_maximals:
                rows = []
                for s, q in enumerate(parts):
                    for i in range(q.algebra.dim):
                        if s != t:
                            rows.append(_unit(L.dim, offsets[s] + i, F))
                for b in M.basis:
                    w = [F.zero] * L.dim
                    w[offsets[t] : offsets[t] + p.algebra.dim] = b
                    rows.append(tuple(w))
                maxs.append(Subspace.span(F, L.dim, rows))
        levi = tuple(c for p in parts for c in p.levi_components)
        return _entry(L.provenance, L, maxs, props, "direct sum", levi)
    raise ValueError(f"unknown catalog name {base!r}")


def _unit(n, i, F):
    return tuple(F.one if j == i else F.zero for j in range(n))


def _split_params(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _ints(params, count, name):
    if len(params) != count:
        raise ValueError(f"{name} takes {count} parameter(s), got {len(params)}")
    try:
        return tuple(int(p) for p in params)
    except (TypeError, ValueError):
        raise ValueError(f"{name} parameters must be integers: {params}") from None


def finite_catalog(F: FieldSpec, max_dim: int) -> list[CatalogEntry]:
    """The named algebras over ``F`` of dimension at most ``max_dim``."""
    names = [
        "abelian(1)", "abelian(2)", "abelian(3)", "abelian(4)", "abelian(5)",
        "r2", "heisenberg", "sl2", "upper_triangular(2)",
        "direct_sum(r2,abelian(1))", "direct_sum(r2,r2)", "direct_sum(heisenberg,abelian(1))",
        "direct_sum(sl2,abelian(1))", "direct_sum(sl2,r2)", "direct_sum(r2,heisenberg)",
        "direct_sum(sl2,abelian(2))", "direct_sum(heisenberg,abelian(2))",
    ]
    out = []
    for nm in names:
        e = catalog(nm, field=F)
        if 0 < e.algebra.dim <= max_dim:
            out.append(e)
    return out


# --- corpus -------------------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusSpec:
    field: FieldSpec
    ambient_matrix_size: int = 3
    generator_count: int = 2
    seed: int = 42
    max_dim: int = 5
    target_count: int = 100
    attempt_budget: int = 0
    include_catalog: bool = True
    enrich: bool = True
    derivation_draws: int = 8


def matrix_closure(F: FieldSpec, mats: Sequence, max_dim: int) -> Subspace | None:
    """Span of the Lie subalgebra of gl_n generated by ``mats``; None past ``max_dim``."""
    n = len(mats[0])
    W = Subspace.span(F, n * n, [tuple(x for r in m for x in r) for m in mats])
    while True:
        if W.dim > max_dim:
            return None
        gens = [tuple(tuple(v[r * n : (r + 1) * n]) for r in range(n)) for v in W.basis]
        new = []
        for a, b in itertools.combinations(gens, 2):
            c = _commutator(a, b, F)
            v = tuple(x for r in c for x in r)
            if not W.contains(v):
                new.append(v)
        if not new:
            return W
        W = Subspace.span(F, n * n, list(W.basis) + new)


def subspace_algebra(F: FieldSpec, W: Subspace, n: int, provenance: str = "") -> LieAlgebra:
    """Structure constants of a commutator-closed matrix span in its RREF basis."""
    gens = [tuple(tuple(v[r * n : (r + 1) * n]) for r in range(n)) for v in W.basis]
    br = {}
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            c = _commutator(gens[a], gens[b], F)
            br[(a, b)] = W.coords(tuple(x for r in c for x in r))
    return LieAlgebra.from_brackets(F, len(gens), br, None, provenance)


SHAPES = ("dense", "upper", "strict_upper", "affine")


def _random_matrix(rng: random.Random, F: FieldSpec, n: int, shape: str):
    density = rng.choice((0.15, 0.3, 0.5, 0.8))

    def entry(r, c):
        if shape == "upper" and c < r:
            return 0
        if shape == "strict_upper" and c <= r:
            return 0
        if shape == "affine" and r == n - 1:
            return 0
        return rng.randrange(1, F.p) if rng.random() < density else 0

    return tuple(tuple(entry(r, c) for c in range(n)) for r in range(n))


def _derived_algebras(L: LieAlgebra, max_dim: int) -> Iterable[LieAlgebra]:
    """Quotients of ``L`` by its principal ideals, then its maximal subalgebras."""
    F = L.field
    tag = L.provenance or "corpus"
    seen = set()
    for v in projective_points(L.dim, F):
        I = ideal_closure(L, Subspace.span(F, L.dim, [v]))
        if I.dim == L.dim or I.key() in seen:
            continue
        seen.add(I.key())
        Q, _ = quotient(L, I)
        yield _retag(Q, f"{tag}/ideal{I.dim}")
    for M in maximal_subalgebras(L):
        yield _retag(restrict(L, M), f"{tag}|max{M.dim}")


def derivation_extension(K: LieAlgebra, D, provenance: str = "") -> LieAlgebra:
    """``K`` extended by one element ``t`` with ``[t, k] = D k`` for a derivation ``D``.

    ``t`` is the last basis vector and ``K`` is an ideal of codimension 1.
    """
    F, n = K.field, K.dim
    br = {(i, j): v + (F.zero,) for i, j, v in K.sc}
    for j in range(n):
        col = tuple(D[r][j] for r in range(n))
        if any(col):
            br[(n, j)] = col + (F.zero,)
    return LieAlgebra.from_brackets(F, n + 1, br, None, provenance)


def _retag(L: LieAlgebra, provenance: str) -> LieAlgebra:
    return LieAlgebra(L.field, L.dim, L.sc, L.labels, provenance)


def generate_corpus(spec: CorpusSpec) -> list[LieAlgebra]:
    """Deterministic corpus of Lie algebras over a finite field.

    Randomness comes only from ``random.Random(spec.seed)`` (Mersenne
    Twister).  Catalog algebras come first.  Each attempt then draws between 1
    and ``generator_count`` matrices of a random size ``2..ambient_matrix_size``
    and a random shape (dense, upper triangular, strictly upper triangular, or
    zero last row), with nonzero entries at a per-matrix density picked from
    ``(0.15, 0.3, 0.5, 0.8)``.  The span of the draws is closed under
    commutators and kept when ``1 <= dim <= max_dim`` and its fingerprint is
    new.  With ``enrich`` set, corpus members are then processed in order and
    their quotients by principal ideals and their maximal subalgebras are
    offered too, followed by direct sums of pairs of members, until the target
    is reached.
    """
    F = spec.field
    if not F.is_finite:
        raise InfiniteFieldError("corpus generation needs a finite field")
    out: list[LieAlgebra] = []
    seen = set()

    def offer(L: LieAlgebra) -> bool:
        if len(out) >= spec.target_count or L.dim == 0 or L.dim > spec.max_dim:
            return False
        fp = fingerprint(L)
        if fp in seen:
            return False
        if validate(L):
            raise AssertionError(f"generated algebra fails Jacobi: {L}")
        seen.add(fp)
        out.append(L)
        return True

    if spec.include_catalog:
        for e in finite_catalog(F, spec.max_dim):
            offer(_retag(e.algebra, e.name))
    rng = random.Random(spec.seed)
    n = spec.ambient_matrix_size
    budget = spec.attempt_budget or 400 * spec.target_count
    attempts = 0
    while len(out) < spec.target_count and attempts < budget:
        attempts += 1
        count = rng.randint(1, spec.generator_count)
        size = rng.randint(2, n)
        shape = rng.choice(SHAPES)
        mats = [_random_matrix(rng, F, size, shape) for _ in range(count)]
        W = matrix_closure(F, mats, spec.max_dim)
        if W is None or W.dim == 0:
            continue
        offer(subspace_algebra(F, W, size, f"{F}:seed{spec.seed}:#{attempts}"))
    if spec.enrich:
        for i in range(len(out)):
            K = out[i]
            if K.dim >= spec.max_dim:
                continue
            der = derivations(K)
            for _ in range(spec.derivation_draws):
                coeffs = [rng.randrange(F.p) for _ in der]
                D = [[sum(c * m[r][k] for c, m in zip(coeffs, der)) % F.p for k in range(K.dim)] for r in range(K.dim)]
                offer(derivation_extension(K, D, f"{K.provenance}:der"))
        i = 0
        while i < len(out) and len(out) < spec.target_count:
            for D in _derived_algebras(out[i], spec.max_dim):
                offer(D)
            i += 1
        for a, b in itertools.combinations_with_replacement(list(out), 2):
            if a.dim + b.dim <= spec.max_dim:
                offer(_retag(direct_sum(a, b), f"{a.provenance}(+){b.provenance}"))
    if len(out) < spec.target_count:
        log.warning(
            "corpus over %s reached %d of %d algebras after %d attempts",
            F, len(out), spec.target_count, attempts,
        )
    return out
