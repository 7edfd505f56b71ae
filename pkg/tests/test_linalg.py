import pytest

from dgbv_lab.errors import LinearAlgebraError
from dgbv_lab.graded import Vector
from dgbv_lab.linalg import (
    Subspace,
    determinant,
    from_domain,
    inverse,
    matmul,
    nullspace,
    rank,
    rref,
    solve,
    to_domain,
)
from dgbv_lab.scalar import Scalar


def m(rows):
    return [[Scalar.parse(x) if isinstance(x, str) else Scalar(x) for x in row] for row in rows]


def test_rref_and_rank():
    rows = m([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    reduced, pivots = rref(rows)
    assert pivots == [0, 1]
    assert reduced == m([[1, 0, 1], [0, 1, 1]])
    assert rank(rows) == 2


def test_nullspace_is_canonical():
    basis = nullspace(m([[1, 2, 3], [0, 1, 1]]), 3)
    assert basis == m([[-1, -1, 1]])


def test_solve_consistent_and_inconsistent():
    rows = m([[1, 1], [1, -1]])
    assert solve(rows, m([[2, 0]])[0], 2) == m([[1, 1]])[0]
    assert solve(m([[1, 1], [2, 2]]), m([[1, 3]])[0], 2) is None


def test_inverse_and_determinant_over_gaussian_rationals():
    rows = m([["i", 1], [0, 2]])
    inv = inverse(rows)
    assert matmul(rows, inv) == m([[1, 0], [0, 1]])
    assert determinant(rows) == Scalar(0, 2)
    with pytest.raises(LinearAlgebraError):
        inverse(m([[1, 2], [2, 4]]))


def test_subspace_operations():
    x = Subspace.of_vectors([Vector({0: 1}), Vector({1: 1})], 3)
    y = Subspace.of_vectors([Vector({1: 1, 2: 1})], 3)
    assert (x + y).dim == 3
    assert x.intersection(y).dim == 0
    z = Subspace.of_vectors([Vector({0: 1, 1: 1})], 3)
    assert z <= x
    assert x.intersection(z) == z
    assert x.contains(Vector({0: 2, 1: -1}))
    assert not x.contains(Vector({2: 1}))


def test_subspace_equality_is_canonical():
    a = Subspace.of_vectors([Vector({0: 1, 1: 1}), Vector({0: 1})], 2)
    b = Subspace.whole(2)
    assert a == b


def test_domain_conversion_is_exact():
    for value in (Scalar.parse("-7/3+5/2i"), Scalar(0), Scalar.parse("i")):
        assert from_domain(to_domain(value)) == value


def test_non_square_matrices_are_rejected():
    rows = m([[1, 2, 3], [0, 1, 1]])
    with pytest.raises(LinearAlgebraError):
        inverse(rows)
    with pytest.raises(LinearAlgebraError):
        determinant(rows)
    assert determinant([]) == 1
