"""Exact rational dense linear algebra.

Scalars are fractions.Fraction throughout.  Ranks, kernels and echelon
forms feed classification verdicts downstream, so every elimination step
must be exact; floats are rejected at the door.  Subspaces are stored by
their reduced row echelon basis, which is unique, so equal subspaces
compare equal and every derived basis is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

Scalar = Fraction

Vector = Tuple[Fraction, ...]


def frac(x) -> Fraction:
    """Coerce an int, a string like '3/2' or a Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point input rejected; pass a Fraction")
    return Fraction(x)


def vector(entries) -> Vector:
    return tuple(frac(e) for e in entries)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def add_vectors(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub_vectors(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale_vector(c, v: Vector) -> Vector:
    c = frac(c)
    return tuple(c * a for a in v)


def is_zero_vector(v: Vector) -> bool:
    return all(a == 0 for a in v)


def _rref(rows):
    """Row reduce a list of row lists in place; return (rows, pivot columns).

    Leftmost pivot, rows processed top down; the output rows (zero rows
    dropped) are the unique RREF of the input row space.
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        if inv != 1:
            rows[r] = [e / inv for e in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


class Matrix:
    """Immutable dense matrix over Fraction."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(frac(e) for e in row) for row in rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", len(rows[0]) if rows else 0)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        cols = [tuple(frac(e) for e in c) for c in cols]
        if not cols:
            return cls([])
        height = len(cols[0])
        if any(len(c) != height for c in cols):
            raise ValueError("ragged columns")
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(height)])

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def row(self, i: int) -> Vector:
        return self.rows[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)])

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = other.ncols
            return Matrix([[sum(self.rows[i][k] * other.rows[k][j]
                                for k in range(self.ncols))
                            for j in range(cols)]
                           for i in range(self.nrows)])
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Matrix":
        c = frac(c)
        return Matrix([[c * a for a in r] for r in self.rows])

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        v = vector(v)
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_skew(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all(self.rows[i][j] == -self.rows[j][i]
                   for i in range(self.nrows) for j in range(i, self.ncols))

    def flatten(self) -> Vector:
        return tuple(a for r in self.rows for a in r)

    def rref(self):
        rows, pivots = _rref(self.rows)
        rows = rows + [[Fraction(0)] * self.ncols
                       for _ in range(self.nrows - len(rows))]
        return Matrix(rows), tuple(pivots)

    def rank(self) -> int:
        _, pivots = _rref(self.rows)
        return len(pivots)

    def det(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        rows = [list(r) for r in self.rows]
        det = Fraction(1)
        for c in range(n):
            pivot_row = None
            for i in range(c, n):
                if rows[i][c] != 0:
                    pivot_row = i
                    break
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != c:
                rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
                det = -det
            det *= rows[c][c]
            inv = rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    f = rows[i][c] / inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return det

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + [Fraction(1 if i == j else 0) for j in range(n)]
               for i, r in enumerate(self.rows)]
        reduced, pivots = _rref(aug)
        if list(pivots) != list(range(n)):
            raise ValueError("matrix is singular")
        return Matrix([row[n:] for row in reduced])

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(%r)" % (self.rows,)


def stack_rows(matrices: Sequence[Matrix]) -> Matrix:
    rows = []
    for m in matrices:
        rows.extend(m.rows)
    return Matrix(rows)


class Subspace:
    """A linear subspace stored by its unique RREF basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [vector(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("ambient dimension mismatch")
        rows, _ = _rref(vecs)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [unit_vector(n, i) for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        """Coefficients of v over the RREF basis, or None if v is outside."""
        v = vector(v)
        if len(v) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        residual = list(v)
        coeffs = []
        for row in self.basis:
            pivot = next(j for j, e in enumerate(row) if e != 0)
            c = residual[pivot]
            coeffs.append(c)
            if c != 0:
                residual = [a - c * b for a, b in zip(residual, row)]
        if any(a != 0 for a in residual):
            return None
        return tuple(coeffs)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(dim=%d, ambient=%d)" % (self.dim, self.ambient_dim)


def kernel_basis(m: Matrix) -> Subspace:
    """The solution space {v : Mv = 0} with its RREF basis."""
    reduced, pivots = _rref(m.rows)
    n = m.ncols
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    vectors = []
    for j in free:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][j]
        vectors.append(v)
    return Subspace(n, vectors)


def solve(m: Matrix, b: Sequence) -> Optional[Vector]:
    """A particular solution of Mx = b with free variables set to zero."""
    b = vector(b)
    if len(b) != m.nrows:
        raise ValueError("shape mismatch")
    aug = [list(row) + [b[i]] for i, row in enumerate(m.rows)]
    reduced, pivots = _rref(aug)
    if m.ncols in pivots:
        return None
    x = [Fraction(0)] * m.ncols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][m.ncols]
    return tuple(x)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces of the same ambient space.

    A vector lies in both spans iff it can be written over both bases;
    the kernel of [A^t | -B^t] yields the matching coefficient pairs.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    n = a.ambient_dim
    cols = [list(v) for v in a.basis] + [[-e for e in v] for v in b.basis]
    stacked = Matrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])
    pairs = kernel_basis(stacked)
    vectors = []
    for coeffs in pairs.basis:
        v = [Fraction(0)] * n
        for c, row in zip(coeffs[:a.dim], a.basis):
            if c != 0:
                v = [x + c * y for x, y in zip(v, row)]
        vectors.append(v)
    return Subspace(n, vectors)
