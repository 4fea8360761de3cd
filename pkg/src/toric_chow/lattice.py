"""Exact linear algebra over the integers and the rationals.

Vectors are tuple subclasses so they hash, sort and compare like plain
tuples.  Arithmetic operators are overridden: ``+`` is vector addition and
``*`` is scalar multiplication, never tuple concatenation or repetition.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational

from .errors import NotPrimitive, RankMismatch, ZeroVector

Matrix = tuple  # tuple of row tuples


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not lattice coordinates")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    raise TypeError(f"non-integral lattice coordinate {x!r}")


class _Vector(tuple):
    __slots__ = ()

    @property
    def rank(self) -> int:
        return len(self)

    def _check(self, other):
        if len(other) != len(self):
            raise RankMismatch(f"rank {len(self)} vs {len(other)}")

    def __add__(self, other):
        self._check(other)
        return _make(a + b for a, b in zip(self, other))

    __radd__ = __add__

    def __sub__(self, other):
        self._check(other)
        return _make(a - b for a, b in zip(self, other))

    def __rsub__(self, other):
        self._check(other)
        return _make(b - a for a, b in zip(self, other))

    def __neg__(self):
        return _make(-a for a in self)

    def __mul__(self, scalar):
        if not isinstance(scalar, Rational):
            return NotImplemented
        return _make(scalar * a for a in self)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return _make(Fraction(a) / scalar for a in self)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def __repr__(self):
        return f"{type(self).__name__}({tuple(str(a) for a in self)})".replace("'", "")


class LatticeVector(_Vector):
    """A point of N or M with arbitrary-precision integer coordinates."""

    __slots__ = ()

    def __new__(cls, coords):
        return super().__new__(cls, (_as_int(c) for c in coords))


class RationalVector(_Vector):
    """A point of N_Q; every coordinate is a Fraction in lowest terms."""

    __slots__ = ()

    def __new__(cls, coords):
        return super().__new__(cls, (Fraction(c) for c in coords))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self)

    def to_lattice(self) -> LatticeVector:
        return LatticeVector(self)


def _make(values):
    values = tuple(values)
    if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)
           for v in values) and not any(isinstance(v, Fraction) for v in values):
        return LatticeVector(values)
    return RationalVector(values)


def vec(coords) -> LatticeVector | RationalVector:
    """Build a LatticeVector when every coordinate is an int, else a RationalVector."""
    values = tuple(coords)
    if all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        return LatticeVector(values)
    return RationalVector(values)


def content(v) -> int:
    """gcd of the coordinates of an integer vector (0 for the zero vector)."""
    return reduce(gcd, (abs(_as_int(c)) for c in v), 0)


def primitive_vector(v) -> tuple[LatticeVector, int]:
    """Split a nonzero lattice vector as ``length * u`` with ``u`` primitive."""
    v = LatticeVector(v)
    g = content(v)
    if g == 0:
        raise ZeroVector("the zero vector has no primitive direction")
    return LatticeVector(c // g for c in v), g


def is_primitive(v) -> bool:
    return content(v) == 1


def primitive_direction(v) -> LatticeVector:
    """Primitive integer vector on the ray of a nonzero rational vector."""
    v = [Fraction(c) for c in v]
    denom = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in v), 1)
    return primitive_vector([int(c * denom) for c in v])[0]


def pair(m, n):
    """Exact dot product of a character m with a (possibly rational) cocharacter n."""
    if len(m) != len(n):
        raise RankMismatch(f"cannot pair rank {len(m)} with rank {len(n)}")
    return sum((a * b for a, b in zip(m, n)), 0)


# -- matrices ---------------------------------------------------------------

def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a, ncols: int | None = None) -> Matrix:
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*a))


def matmul(a, b) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return _make(sum((x * y for x, y in zip(row, v)), 0) for row in a)


def rref(rows, ncols: int):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r]], pivots


def rank_of(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def rational_kernel(rows, ncols: int) -> tuple[LatticeVector, ...]:
    """Canonical basis of {x : row . x = 0 for every row}, as primitive integer vectors.

    The basis is the standard one read off the reduced row echelon form, so
    it depends only on the row space, not on the given rows.
    """
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(primitive_direction(x))
    return tuple(basis)


def canonical_row_space(rows, ncols: int) -> tuple[LatticeVector, ...]:
    """Primitive integer rows of the reduced echelon form: a canonical key for a subspace."""
    red, _ = rref(rows, ncols)
    return tuple(primitive_direction(r) for r in red)


def solve(columns, target) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum c_i columns_i = target, or None when unsolvable.

    The columns must be linearly independent for the answer to be unique.
    """
    n = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    red, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    sol = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        sol[p] = row[k]
    return tuple(sol)


def determinant(a) -> Fraction:
    n = len(a)
    m = [[Fraction(x) for x in r] for r in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def integer_inverse(a) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    inv = tuple(tuple(row[n:]) for row in red)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv)


# -- Smith normal form --------------------------------------------------------

def smith_normal_form(a) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*A*V = D, U and V unimodular, D in Smith form.

    Pivots are chosen as the entry of least absolute value (ties broken by
    row, then column), which makes the decomposition deterministic.
    """
    a = [list(map(_as_int, r)) for r in a]
    m = len(a)
    if m == 0:
        raise ValueError("empty matrix")
    n = len(a[0])
    d = [r[:] for r in a]
    u = [list(r) for r in identity(m)]
    v = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for k in range(min(m, n)):
        while True:
            entries = [(abs(d[i][j]), i, j) for i in range(k, m) for j in range(k, n) if d[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != k:
                swap_rows(k, pi)
            if pj != k:
                swap_cols(k, pj)
            p = d[k][k]
            clean = True
            for i in range(k + 1, m):
                if d[i][k]:
                    add_row(i, k, -(d[i][k] // p))
                    clean &= d[i][k] == 0
            for j in range(k + 1, n):
                if d[k][j]:
                    add_col(j, k, -(d[k][j] // p))
                    clean &= d[k][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(k + 1, m) for j in range(k + 1, n) if d[i][j] % p), None)
            if bad is not None:
                add_row(k, bad, 1)
                continue
            break
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    freeze = lambda x: tuple(tuple(r) for r in x)  # noqa: E731
    return freeze(u), freeze(d), freeze(v)


def integer_kernel(rows, ncols: int) -> tuple[LatticeVector, ...]:
    """A Z-basis of the saturated lattice {x in Z^n : row . x = 0}."""
    if not rows:
        return tuple(LatticeVector(r) for r in identity(ncols))
    _, d, v = smith_normal_form(rows)
    r = sum(1 for i in range(min(len(d), ncols)) if d[i][i])
    return tuple(LatticeVector(v[i][j] for i in range(ncols)) for j in range(r, ncols))


@dataclass(frozen=True)
class QuotientLatticeMap:
    """Surjection Z^d -> Z^(d-k) killing a saturated sublattice.

    ``matrix`` is the projection; ``right_inverse`` is a d x (d-k) integer
    matrix R with matrix * R = identity, used to lift points canonically.
    """

    source_rank: int
    target_rank: int
    matrix: Matrix
    kernel_generator: LatticeVector | None
    right_inverse: Matrix
    kernel_basis: tuple[LatticeVector, ...] = ()

    def __call__(self, v):
        if len(v) != self.source_rank:
            raise RankMismatch(f"expected rank {self.source_rank}, got {len(v)}")
        return matvec(self.matrix, v) if self.matrix else LatticeVector(())

    def lift(self, x):
        if len(x) != self.target_rank:
            raise RankMismatch(f"expected rank {self.target_rank}, got {len(x)}")
        if self.target_rank == 0:
            return _make(0 for _ in range(self.source_rank))
        return matvec(self.right_inverse, x)


def sublattice_quotient(basis, d: int) -> QuotientLatticeMap:
    """Canonical projection of Z^d onto Z^d / L for a saturated sublattice L.

    Take the Smith decomposition U*B*V = D of the d x k basis matrix B; the
    last d-k rows of U form the projection.  Each projection row is then
    signed so its first nonzero entry is positive.
    """
    basis = [LatticeVector(b) for b in basis]
    k = len(basis)
    if k == 0:
        eye = identity(d)
        return QuotientLatticeMap(d, d, eye, None, eye, ())
    cols = transpose(basis)
    u, dmat, vmat = smith_normal_form(cols)
    if any(dmat[i][i] != 1 for i in range(k)):
        raise NotPrimitive("sublattice is not saturated (or basis is dependent)")
    u = [list(r) for r in u]
    for i in range(k, d):
        lead = next(x for x in u[i] if x)
        if lead < 0:
            u[i] = [-x for x in u[i]]
    u = tuple(tuple(r) for r in u)
    inv = integer_inverse(u)
    proj = u[k:]
    right = tuple(tuple(row[k:]) for row in inv)
    gen = basis[0] if k == 1 else None
    return QuotientLatticeMap(d, d - k, proj, gen, right, tuple(basis))


def quotient_lattice(rank: int, n0) -> QuotientLatticeMap:
    """Projection N -> N / Z*n0 for a primitive n0 (the SNF convention)."""
    n0 = LatticeVector(n0)
    if len(n0) != rank:
        raise RankMismatch(f"direction has rank {len(n0)}, lattice has rank {rank}")
    if n0.is_zero():
        raise ZeroVector("direction must be nonzero")
    if not is_primitive(n0):
        raise NotPrimitive(f"{tuple(n0)} is not primitive")
    return sublattice_quotient([n0], rank)
