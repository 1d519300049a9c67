from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from liesec.exactla import (
    GF,
    QQ,
    BudgetExceeded,
    FieldMismatch,
    InfiniteFieldError,
    Subspace,
    count_subspaces,
    enumerate_subspaces,
    gaussian_binomial,
    kernel,
    projective_points,
    rank,
    rref,
)
from oracles import all_subspace_sets, combos, dim_of, elements


def _det(m, F):
    """Leibniz determinant; independent of row reduction."""
    n = len(m)
    total = F.zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = F.one
        for i in range(n):
            prod = prod * m[i][perm[i]]
        total = total + (-prod if inv % 2 else prod)
    return total if F.p is None else total % F.p


def _minor_rank(m, F):
    rows, cols = len(m), len(m[0]) if m else 0
    for k in range(min(rows, cols), 0, -1):
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                if _det([[m[r][c] for c in cs] for r in rs], F):
                    return k
    return 0


@pytest.mark.parametrize("F", [QQ, GF(2), GF(3), GF(5)])
def test_rank_matches_minor_oracle(F):
    rng = random.Random(7)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        if F.p is None:
            m = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
        else:
            m = [[rng.randrange(F.p) for _ in range(c)] for _ in range(r)]
        assert rank(m, F) == _minor_rank(m, F)


def test_rref_shape_and_pivots():
    F = QQ
    m = [[2, 4, 6], [1, 2, 4], [3, 6, 10]]
    red, r, piv = rref([[F(x) for x in row] for row in m], F)
    assert r == 2
    assert piv == (0, 2)
    assert red == ((1, 2, 0), (0, 0, 1))


def test_kernel_is_annihilated():
    F = GF(3)
    m = [[1, 2, 0, 1], [0, 1, 1, 2]]
    K = kernel(m, F, 4)
    assert K.dim == 2
    for v in K.basis:
        assert all(sum(a * b for a, b in zip(row, v)) % 3 == 0 for row in m)


def test_gaussian_binomial_values():
    # [TRIVIAL] 3 lines in GF(2)^2, 374 subspaces in GF(2)^5
    assert gaussian_binomial(2, 1, 2) == 3
    assert count_subspaces(5, 2) == 374
    assert gaussian_binomial(4, 2, 3) == 130
    assert gaussian_binomial(3, 5, 2) == 0


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (3, 3)])
def test_enumeration_matches_brute_force(p, n):
    F = GF(p)
    brute = all_subspace_sets(p, n)
    got = [S for d in range(n + 1) for S in enumerate_subspaces(n, F, d)]
    assert len(got) == len(brute) == count_subspaces(n, p)
    assert {elements(S) for S in got} == brute
    for d in range(n + 1):
        assert sum(1 for S in got if S.dim == d) == gaussian_binomial(n, d, p)
        assert sum(1 for S in brute if dim_of(S, p) == d) == gaussian_binomial(n, d, p)


def test_enumeration_budget_and_infinite_field():
    with pytest.raises(BudgetExceeded):
        list(enumerate_subspaces(6, GF(7), 3, budget=1000))
    with pytest.raises(InfiniteFieldError):
        list(enumerate_subspaces(2, QQ, 1))


def test_projective_points_are_distinct_lines():
    F = GF(3)
    pts = list(projective_points(3, F))
    assert len(pts) == (3**3 - 1) // 2
    lines = {elements(Subspace.span(F, 3, [v])) for v in pts}
    assert len(lines) == len(pts)


def test_intersection_and_sum_against_element_sets():
    F = GF(2)
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 4)
        U = Subspace.span(F, n, [tuple(rng.randrange(2) for _ in range(n)) for _ in range(rng.randint(0, 3))])
        V = Subspace.span(F, n, [tuple(rng.randrange(2) for _ in range(n)) for _ in range(rng.randint(0, 3))])
        assert elements(U & V) == elements(U) & elements(V)
        assert elements(U + V) == combos(list(U.basis) + list(V.basis), 2, n)
        assert (U <= V) == (elements(U) <= elements(V))


def test_subspace_equality_is_canonical():
    F = QQ
    a = Subspace.span(F, 3, [(1, 1, 0), (0, 1, 1)])
    b = Subspace.span(F, 3, [(1, 2, 1), (2, 1, -1)])
    assert a == b
    assert a.contains((1, 0, -1))
    assert not a.contains((1, 0, 0))
    assert a.annihilator() == Subspace.span(F, 3, [(1, -1, 1)])


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Subspace.full(GF(2), 2) & Subspace.full(GF(3), 2)
    with pytest.raises(FieldMismatch):
        Subspace.full(QQ, 2) + Subspace.full(QQ, 3)


def test_field_parsing_and_format():
    assert QQ.parse("-3/6") == Fraction(-1, 2)
    assert QQ.format(Fraction(-1, 2)) == "-1/2"
    assert GF(5).parse("7") == 2
    assert GF(5).parse("1/2") == 3
    assert GF(5)(Fraction(1, 2)) == 3
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(InfiniteFieldError):
        QQ.elements()
