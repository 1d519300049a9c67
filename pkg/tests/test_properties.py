"""Property tests over random small Lie algebras and subspaces."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from liesec.csection import analyze_maximal, c_index, ideal_index, is_c_ideal, primitivity_type
from liesec.exactla import GF, QQ, Subspace, kernel, rank, rref, solve_left_membership
from liesec.liealg import (
    LieAlgebra,
    bracket,
    core,
    fingerprint,
    ideal_closure,
    is_ideal,
    is_solvable,
    quotient,
    radical,
    restrict,
    validate,
)
from liesec.maximal import matrix_closure, maximal_subalgebras, subspace_algebra

fields = st.sampled_from([GF(2), GF(3), GF(5)])


@st.composite
def matrices(draw, F=None, max_rows=4, max_cols=4):
    F = F or draw(st.sampled_from([QQ, GF(2), GF(3), GF(5)]))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    if F.p is None:
        entry = st.builds(Fraction, st.integers(-3, 3), st.integers(1, 3))
    else:
        entry = st.integers(0, F.p - 1)
    return F, draw(st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r))


@st.composite
def subspace_pairs(draw):
    F = draw(fields)
    n = draw(st.integers(1, 5))
    vec = st.tuples(*[st.integers(0, F.p - 1)] * n)
    U = Subspace.span(F, n, draw(st.lists(vec, max_size=4)))
    V = Subspace.span(F, n, draw(st.lists(vec, max_size=4)))
    return U, V


@st.composite
def algebras(draw, max_dim=5):
    """A random commutator-closed matrix algebra, rejected if it grows past ``max_dim``."""
    F = draw(st.sampled_from([GF(2), GF(3)]))
    n = draw(st.integers(2, 3))
    mat = st.tuples(*[st.tuples(*[st.integers(0, F.p - 1)] * n)] * n)
    mats = draw(st.lists(mat, min_size=1, max_size=3))
    W = matrix_closure(F, mats, max_dim)
    assume(W is not None and W.dim >= 1)
    return subspace_algebra(F, W, n)


def _vector(draw, L):
    return tuple(draw(st.lists(st.integers(0, L.field.p - 1), min_size=L.dim, max_size=L.dim)))


@given(matrices())
def test_rref_is_idempotent_and_rank_nullity(fm):
    F, m = fm
    ncols = len(m[0])
    red, r, piv = rref([[F(x) for x in row] for row in m], F)
    assert rref([list(row) for row in red], F)[0] == red
    assert len(piv) == r == rank(m, F)
    K = kernel(m, F, ncols)
    assert K.dim == ncols - r
    for v in K.basis:
        for row in m:
            dot = sum(F(a) * b for a, b in zip(row, v))
            assert (dot if F.p is None else dot % F.p) == 0


@given(subspace_pairs())
def test_dimension_formula(pair):
    U, V = pair
    S, I = U + V, U & V
    assert S.dim + I.dim == U.dim + V.dim
    assert I <= U and I <= V and U <= S and V <= S
    for b in U.basis:
        assert S.contains(b)
        coords = U.coords(b)
        assert solve_left_membership(b, U.basis, U.field) is not None and len(coords) == U.dim


@given(algebras())
def test_matrix_algebras_satisfy_jacobi(L):
    assert validate(L) == []


@given(st.data())
def test_core_is_the_largest_ideal_inside(data):
    L = data.draw(algebras(max_dim=4))
    vs = [_vector(data.draw, L) for _ in range(data.draw(st.integers(0, 3)))]
    B = Subspace.span(L.field, L.dim, vs)
    K = core(L, B)
    assert K <= B and is_ideal(L, K)
    # every ideal generated by an element of B that stays in B lies in the core
    for b in B.basis:
        J = ideal_closure(L, Subspace.span(L.field, L.dim, [b]))
        if J <= B:
            assert J <= K


@given(algebras())
def test_radical_is_a_solvable_ideal_with_semisimple_quotient(L):
    R = radical(L)
    assert is_ideal(L, R) and is_solvable(restrict(L, R))
    Q, _ = quotient(L, R)
    assert Q.dim == 0 or radical(Q).dim == 0


def _random_basis_change(draw, L):
    F, n = L.field, L.dim
    while True:
        P = [[draw(st.integers(0, F.p - 1)) for _ in range(n)] for _ in range(n)]
        if rank(P, F) == n:
            return P


@given(st.data())
def test_fingerprint_is_a_basis_invariant(data):
    L = data.draw(algebras())
    P = _random_basis_change(data.draw, L)
    F, n = L.field, L.dim
    cols = [tuple(P[r][i] for r in range(n)) for i in range(n)]
    br = {}
    for i in range(n):
        for j in range(i + 1, n):
            br[(i, j)] = solve_left_membership(bracket(L, cols[i], cols[j]), cols, F)
    L2 = LieAlgebra.from_brackets(F, n, br)
    assert validate(L2) == []
    assert fingerprint(L2) == fingerprint(L)


@given(st.data())
def test_quotient_map_is_a_homomorphism(data):
    L = data.draw(algebras())
    x = _vector(data.draw, L)
    I = ideal_closure(L, Subspace.span(L.field, L.dim, [x]))
    Q, proj = quotient(L, I)
    assert Q.dim == L.dim - I.dim and validate(Q) == []
    a, b = _vector(data.draw, L), _vector(data.draw, L)
    assert proj.image(bracket(L, a, b)) == bracket(Q, proj.image(a), proj.image(b))


@given(algebras(max_dim=4))
def test_index_identities_on_random_algebras(L):
    n = L.dim
    for M in maximal_subalgebras(L):
        k = c_index(L, M)
        assert ideal_index(L, M) == k + n - M.dim
        assert is_c_ideal(L, M).holds == (k == 0)
        t = primitivity_type(L, M)
        if t in (1, 3):
            assert k == 0
        r = analyze_maximal(L, M)
        assert r.c_index == k and r.prim_type == t
        assert r.core <= M and is_ideal(L, r.core)
