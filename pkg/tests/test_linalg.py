import random
from fractions import Fraction

import pytest

from gnla.linalg import (
    Matrix,
    Subspace,
    add_vectors,
    frac,
    intersect,
    kernel_basis,
    scale_vector,
    solve,
    stack_rows,
    sub_vectors,
    unit_vector,
    vector,
    zero_vector,
)


def random_matrix(rng, nrows, ncols, lo=-5, hi=5):
    return Matrix([[Fraction(rng.randint(lo, hi)) for _ in range(ncols)]
                   for _ in range(nrows)])


def det_naive(m):
    """Laplace expansion along the first row, for cross-checking."""
    n = m.nrows
    if n == 1:
        return m[0, 0]
    total = Fraction(0)
    for j in range(n):
        if m[0, j] == 0:
            continue
        minor = Matrix([[m[i, k] for k in range(n) if k != j]
                        for i in range(1, n)])
        sign = -1 if j % 2 else 1
        total += sign * m[0, j] * det_naive(minor)
    return total


def test_frac_accepts_common_inputs():
    assert frac(3) == Fraction(3)
    assert frac("2/7") == Fraction(2, 7)
    assert frac(Fraction(-1, 4)) == Fraction(-1, 4)


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        frac(0.5)


def test_vector_helpers():
    u = vector([1, 2, 3])
    v = vector(["1/2", 0, -1])
    assert add_vectors(u, v) == (Fraction(3, 2), Fraction(2), Fraction(2))
    assert sub_vectors(u, v) == (Fraction(1, 2), Fraction(2), Fraction(4))
    assert scale_vector(Fraction(2), v) == (Fraction(1), Fraction(0), Fraction(-2))
    assert zero_vector(3) == (Fraction(0),) * 3
    assert unit_vector(4, 2) == (0, 0, 1, 0)


def test_matrix_shape_and_indexing():
    m = Matrix([[1, 2, 3], [4, 5, 6]])
    assert (m.nrows, m.ncols) == (2, 3)
    assert m[1, 2] == 6
    assert m.row(0) == (1, 2, 3)
    assert m.column(1) == (2, 5)
    assert m.transpose().rows == ((1, 4), (2, 5), (3, 6))
    assert m.flatten() == (1, 2, 3, 4, 5, 6)


def test_matrix_from_columns_round_trip():
    m = Matrix([[1, 2], [3, 4], [5, 6]])
    assert Matrix.from_columns(list(m.columns())) == m


def test_matrix_arithmetic():
    a = Matrix([[1, 2], [3, 4]])
    b = Matrix([[0, 1], [1, 0]])
    assert (a + b).rows == ((1, 3), (4, 4))
    assert (a - b).rows == ((1, 1), (2, 4))
    assert (-a).rows == ((-1, -2), (-3, -4))
    assert (a * b).rows == ((2, 1), (4, 3))
    assert a.scale(2) == 2 * a
    assert a.apply((1, 0)) == (1, 3)


def test_matrix_mul_shape_check():
    with pytest.raises(ValueError):
        Matrix([[1, 2]]) * Matrix([[1, 2]])


def test_identity_and_zero():
    i3 = Matrix.identity(3)
    z = Matrix.zero(2, 3)
    assert i3 * i3 == i3
    assert z.is_zero()
    assert not i3.is_zero()


def test_is_skew():
    assert Matrix([[0, 2], [-2, 0]]).is_skew()
    assert not Matrix([[0, 2], [2, 0]]).is_skew()
    assert not Matrix([[1, 0], [0, 0]]).is_skew()


def test_rref_is_idempotent_and_pivots_are_unit_columns():
    rng = random.Random(7)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        r, pivots = m.rref()
        r2, pivots2 = r.rref()
        assert r == r2
        assert pivots == pivots2
        for k, c in enumerate(pivots):
            col = r.column(c)
            assert col[k] == 1
            assert all(col[i] == 0 for i in range(len(col)) if i != k)


def test_rank_matches_transpose_rank():
    rng = random.Random(11)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert m.rank() == m.transpose().rank()


def test_det_against_laplace():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 4)
        m = random_matrix(rng, n, n)
        assert m.det() == det_naive(m)


def test_det_multiplicative():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(2, 4)
        a = random_matrix(rng, n, n)
        b = random_matrix(rng, n, n)
        assert (a * b).det() == a.det() * b.det()


def test_det_rejects_rectangular():
    with pytest.raises(ValueError):
        Matrix([[1, 2, 3], [4, 5, 6]]).det()


def test_inverse():
    rng = random.Random(13)
    found = 0
    while found < 15:
        n = rng.randint(2, 4)
        m = random_matrix(rng, n, n)
        if m.det() == 0:
            continue
        found += 1
        assert m * m.inverse() == Matrix.identity(n)
        assert m.inverse() * m == Matrix.identity(n)


def test_inverse_singular_raises():
    with pytest.raises(ValueError):
        Matrix([[1, 2], [2, 4]]).inverse()


def test_stack_rows():
    a = Matrix([[1, 2]])
    b = Matrix([[3, 4], [5, 6]])
    assert stack_rows([a, b]).rows == ((1, 2), (3, 4), (5, 6))


def test_kernel_vectors_are_killed():
    rng = random.Random(17)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        ker = kernel_basis(m)
        # rank-nullity
        assert ker.dim == m.ncols - m.rank()
        for v in ker.basis:
            assert all(x == 0 for x in m.apply(v))


def test_solve_consistent_and_inconsistent():
    rng = random.Random(19)
    checked_none = 0
    for _ in range(60):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        b = tuple(Fraction(rng.randint(-5, 5)) for _ in range(m.nrows))
        x = solve(m, b)
        if x is None:
            # confirmed by rank comparison with the augmented matrix
            aug = Matrix([list(r) + [b[i]] for i, r in enumerate(m.rows)])
            assert aug.rank() == m.rank() + 1
            checked_none += 1
        else:
            assert m.apply(x) == b
    assert checked_none > 0


def test_solve_known_system():
    m = Matrix([[1, 1], [1, -1]])
    assert solve(m, (3, 1)) == (2, 1)


def test_subspace_basis_is_canonical():
    s1 = Subspace(3, [(1, 1, 0), (0, 0, 1)])
    s2 = Subspace(3, [(1, 1, 1), (0, 0, 2), (1, 1, 3)])
    assert s1 == s2
    assert s1.dim == 2


def test_subspace_contains_and_coordinates():
    s = Subspace(3, [(1, 0, 2), (0, 1, -1)])
    v = (3, 2, 4)
    assert s.contains(v)
    coords = s.coordinates(v)
    rebuilt = [sum(c * b[i] for c, b in zip(coords, s.basis))
               for i in range(3)]
    assert tuple(rebuilt) == vector(v)
    assert s.coordinates((0, 0, 1)) is None
    assert not s.contains((0, 0, 1))


def test_subspace_sum_and_intersection_dims():
    """dim(A + B) + dim(A meet B) = dim A + dim B on random spans."""
    rng = random.Random(23)
    for _ in range(25):
        n = rng.randint(2, 5)
        a = Subspace(n, [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
                         for _ in range(rng.randint(0, n))])
        b = Subspace(n, [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
                         for _ in range(rng.randint(0, n))])
        both = a.intersect(b)
        assert (a + b).dim + both.dim == a.dim + b.dim
        for v in both.basis:
            assert a.contains(v) and b.contains(v)
        assert both == intersect(a, b)


def test_subspace_zero_and_full():
    z = Subspace.zero(4)
    f = Subspace.full(4)
    assert z.dim == 0 and f.dim == 4
    assert f.contains((1, 2, 3, 4))
    assert z.intersect(f) == z
    assert (z + f) == f
