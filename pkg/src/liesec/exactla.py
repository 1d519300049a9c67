"""Exact linear algebra over the rationals and prime fields.

Vectors are plain tuples of field elements: ``Fraction`` for the rationals,
``int`` residues in ``[0, p)`` for GF(p).  Matrices are tuples of row tuples.
A :class:`Subspace` stores the reduced row-echelon basis of its row space, so
two subspaces are equal exactly when their stored bases are equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Sequence

Vector = tuple
Matrix = tuple

DEFAULT_BUDGET = 10**6


class FieldMismatch(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class InfiniteFieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (``p is None``) or the prime field GF(p)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"GF({self.p}): {self.p} is not prime")

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or string into a canonical element."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def elements(self) -> list:
        if self.p is None:
            raise InfiniteFieldError("the rationals cannot be enumerated")
        return list(range(self.p))

    def is_canonical(self, x) -> bool:
        if self.p is None:
            return isinstance(x, Fraction)
        return isinstance(x, int) and 0 <= x < self.p

    def format(self, x) -> str:
        return str(x)

    def parse(self, s: str):
        s = s.strip()
        if self.p is None:
            return Fraction(s)
        if "/" in s:
            return self(Fraction(s))
        return int(s) % self.p

    def vector(self, xs: Sequence) -> Vector:
        return tuple(self(x) for x in xs)

    def __str__(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


# --- row reduction -----------------------------------------------------------


def rref(rows: Sequence[Sequence], F: FieldSpec, ncols: int | None = None):
    """Reduced row-echelon form.

    Returns ``(matrix, rank, pivots)`` where ``matrix`` keeps only the nonzero
    rows.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    p = F.p
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        for i in range(r, len(m)):
            if m[i][c]:
                break
        else:
            continue
        m[r], m[i] = m[i], m[r]
        row = m[r]
        piv = row[c]
        if piv != 1:
            if p is None:
                row = [x / piv for x in row]
            else:
                inv = pow(piv, -1, p)
                row = [x * inv % p for x in row]
            m[r] = row
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    other = m[i]
                    if p is None:
                        m[i] = [a - f * b for a, b in zip(other, row)]
                    else:
                        m[i] = [(a - f * b) % p for a, b in zip(other, row)]
        pivots.append(c)
        r += 1
    out = tuple(tuple(row) for row in m[:r])
    return out, r, tuple(pivots)


def rank(rows: Sequence[Sequence], F: FieldSpec) -> int:
    return rref(rows, F)[1]


def matmul(a: Matrix, b: Matrix, F: FieldSpec) -> Matrix:
    bt = list(zip(*b)) if b else []
    p = F.p
    if p is None:
        return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a)


def matvec(a: Matrix, v: Vector, F: FieldSpec) -> Vector:
    if F.p is None:
        return tuple(sum(x * y for x, y in zip(row, v)) for row in a)
    return tuple(sum(x * y for x, y in zip(row, v)) % F.p for row in a)


def identity(n: int, F: FieldSpec) -> Matrix:
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def zero_matrix(r: int, c: int, F: FieldSpec) -> Matrix:
    return tuple((F.zero,) * c for _ in range(r))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def vadd(u: Vector, v: Vector, F: FieldSpec) -> Vector:
    if F.p is None:
        return tuple(a + b for a, b in zip(u, v))
    return tuple((a + b) % F.p for a, b in zip(u, v))


def vscale(c, v: Vector, F: FieldSpec) -> Vector:
    if F.p is None:
        return tuple(c * a for a in v)
    return tuple(c * a % F.p for a in v)


def lincomb(coeffs: Sequence, vectors: Sequence[Vector], F: FieldSpec, n: int) -> Vector:
    acc = [F.zero] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                if a:
                    acc[i] += c * a
    if F.p is not None:
        return tuple(a % F.p for a in acc)
    return tuple(acc)


def is_zero(v: Vector) -> bool:
    return not any(v)


def trace(a: Matrix, F: FieldSpec):
    t = sum(a[i][i] for i in range(len(a)))
    return t % F.p if F.p is not None else Fraction(t)


# --- subspaces -----------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n held as its canonical RREF basis."""

    field: FieldSpec
    ambient_dim: int
    basis: Matrix
    pivots: tuple = dc_field(compare=False, repr=False, default=())

    @classmethod
    def span(cls, F: FieldSpec, n: int, vectors: Sequence[Sequence]) -> "Subspace":
        vecs = [v for v in vectors]
        for v in vecs:
            if len(v) != n:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {n}")
        basis, _, piv = rref(vecs, F, n)
        return cls(F, n, basis, piv)

    @classmethod
    def zero(cls, F: FieldSpec, n: int) -> "Subspace":
        return cls(F, n, (), ())

    @classmethod
    def full(cls, F: FieldSpec, n: int) -> "Subspace":
        return cls(F, n, identity(n, F), tuple(range(n)))

    @classmethod
    def coordinate(cls, F: FieldSpec, n: int, indices: Sequence[int]) -> "Subspace":
        rows = [tuple(F.one if j == i else F.zero for j in range(n)) for i in indices]
        return cls.span(F, n, rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def reduce(self, v: Vector) -> Vector:
        """Remainder of ``v`` after clearing the pivot coordinates."""
        p = self.field.p
        w = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = w[c]
            if f:
                if p is None:
                    w = [a - f * b for a, b in zip(w, row)]
                else:
                    w = [(a - f * b) % p for a, b in zip(w, row)]
        return tuple(w)

    def contains(self, v: Vector) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def coords(self, v: Vector) -> Vector:
        """Coordinates of a member ``v`` in the stored basis."""
        return tuple(v[c] for c in self.pivots)

    def le(self, other: "Subspace") -> bool:
        _check(self, other)
        if self.dim > other.dim:
            return False
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other):
        return self.le(other)

    def __lt__(self, other):
        return self.le(other) and self.dim < other.dim

    def sum(self, other: "Subspace") -> "Subspace":
        _check(self, other)
        return Subspace.span(self.field, self.ambient_dim, self.basis + other.basis)

    def __add__(self, other):
        return self.sum(other)

    def intersect(self, other: "Subspace") -> "Subspace":
        _check(self, other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        if self.dim > other.dim:
            self, other = other, self
        # combinations of our basis whose remainder modulo ``other`` vanishes
        rem = [other.reduce(b) for b in self.basis]
        if not any(any(r) for r in rem):
            return self
        combos = kernel(transpose(rem), self.field, self.dim)
        F, n = self.field, self.ambient_dim
        return Subspace.span(F, n, [lincomb(a, self.basis, F, n) for a in combos.basis])

    def __and__(self, other):
        return self.intersect(other)

    def annihilator(self) -> "Subspace":
        """``{x : b . x = 0 for every basis row b}`` under the standard pairing."""
        return kernel(self.basis, self.field, self.ambient_dim)

    def vectors(self) -> Iterator[Vector]:
        """All members of a subspace over a finite field."""
        F = self.field
        n = self.ambient_dim
        for coeffs in itertools.product(F.elements(), repeat=self.dim):
            yield lincomb(coeffs, self.basis, F, n)

    def key(self) -> tuple:
        return self.basis

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in row) for row in self.basis)
        return f"Subspace<{self.field}^{self.ambient_dim}, dim {self.dim}: [{rows}]>"


def _check(u: Subspace, v: Subspace) -> None:
    if u.field != v.field or u.ambient_dim != v.ambient_dim:
        raise FieldMismatch(
            f"subspaces live in {u.field}^{u.ambient_dim} and {v.field}^{v.ambient_dim}"
        )


def kernel(m: Sequence[Sequence], F: FieldSpec, ncols: int | None = None) -> Subspace:
    """Right null space ``{v : m v = 0}``."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    red, r, piv = rref(m, F, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fcol in free:
        v = [F.zero] * ncols
        v[fcol] = F.one
        for row, pc in zip(red, piv):
            v[pc] = -row[fcol] if F.p is None else (-row[fcol]) % F.p
        basis.append(tuple(v))
    return Subspace.span(F, ncols, basis)


def image(m: Matrix, F: FieldSpec, nrows: int | None = None) -> Subspace:
    """Column space of ``m``."""
    if nrows is None:
        nrows = len(m)
    return Subspace.span(F, nrows, transpose(m) if m else [])


def solve_left_membership(v: Vector, vectors: Sequence[Vector], F: FieldSpec):
    """Coefficients expressing ``v`` in terms of independent ``vectors``."""
    n = len(v)
    k = len(vectors)
    aug = [tuple(vec[i] for vec in vectors) + (v[i],) for i in range(n)]
    red, r, piv = rref(aug, F, k + 1)
    if k in piv:
        raise ValueError("vector is not in the span")
    sol = [F.zero] * k
    for row, pc in zip(red, piv):
        sol[pc] = row[k]
    return tuple(sol)


# --- finite-field enumeration -------------------------------------------------------


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of ``k``-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(
    n: int, F: FieldSpec, dim: int, budget: int = DEFAULT_BUDGET
) -> Iterator[Subspace]:
    """Every ``dim``-dimensional subspace of F^n, each exactly once.

    Ordered by pivot tuple (lexicographic), then by the free entries read
    row-major (lexicographic in field-element order).
    """
    if not F.is_finite:
        raise InfiniteFieldError("subspace enumeration needs a finite field")
    if dim < 0 or dim > n:
        return
    total = gaussian_binomial(n, dim, F.p)
    if total > budget:
        raise BudgetExceeded(
            f"{total} subspaces of dimension {dim} in {F}^{n} exceeds budget {budget}"
        )
    return _enumerate(n, F, dim)


def _enumerate(n: int, F: FieldSpec, dim: int) -> Iterator[Subspace]:
    elems = F.elements()
    for piv in itertools.combinations(range(n), dim):
        pivset = set(piv)
        free = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pivset]
        for vals in itertools.product(elems, repeat=len(free)):
            rows = [[0] * n for _ in range(dim)]
            for r, pc in enumerate(piv):
                rows[r][pc] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            yield Subspace(F, n, tuple(tuple(r) for r in rows), piv)


def count_subspaces(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def projective_points(n: int, F: FieldSpec) -> Iterator[Vector]:
    """One representative (first nonzero entry 1) per line of F^n."""
    elems = F.elements()
    for lead in range(n):
        for tail in itertools.product(elems, repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail
