import pytest

from dgbv_lab.errors import GradingError
from dgbv_lab.graded import (
    BasisElement,
    GradedBasis,
    LinearMap,
    Vector,
    koszul_sign,
    negate_shift,
    supercommutator,
)
from dgbv_lab.scalar import Scalar


def test_koszul_sign_counts_odd_inversions():
    assert koszul_sign([1, 1], [1, 0]) == -1
    assert koszul_sign([1, 0], [1, 0]) == 1
    assert koszul_sign([1, 1, 1], [2, 0, 1]) == 1
    assert koszul_sign([1, 1, 1], [2, 1, 0]) == -1
    assert isinstance(koszul_sign([1, 1], [1, 0]), Scalar)


def test_koszul_sign_rejects_bad_input():
    with pytest.raises(GradingError):
        koszul_sign([1, 1], [0, 0])
    with pytest.raises(GradingError):
        koszul_sign([1], [0, 1])


def test_basis_rejects_duplicates_and_mixed_gradings():
    with pytest.raises(GradingError):
        GradedBasis.from_pairs([("a", 0), ("a", 1)])
    with pytest.raises(GradingError):
        GradedBasis((BasisElement("a", 0, (0, 0)), BasisElement("b", 1)))
    with pytest.raises(GradingError):
        GradedBasis((BasisElement("a", 2, (1, 0)),))


def test_basis_blocks_and_lookup():
    basis = GradedBasis.from_pairs([("1", 0), ("x", 1), ("y", 1), ("xy", 2)])
    assert basis.index("y") == 2
    assert basis.parities == (0, 1, 1, 0)
    assert basis.blocks() == {0: [0], 1: [1, 2], 2: [3]}
    assert basis.top_degree() == 2
    with pytest.raises(GradingError):
        basis.index("z")


def test_vectors_drop_zero_coefficients():
    v = Vector({0: 1, 1: 0, 2: Scalar(0, 1)})
    assert v.support() == [0, 2]
    assert not (v - v)
    assert (v + v)[2] == Scalar(0, 2)
    assert v.conjugate()[2] == Scalar(0, -1)


def test_vector_parity_rejects_mixed_support():
    basis = GradedBasis.from_pairs([("1", 0), ("x", 1)])
    assert Vector.basis(1).parity(basis) == 1
    with pytest.raises(GradingError):
        Vector({0: 1, 1: 1}).parity(basis)


def test_linear_map_composition_tracks_shift():
    basis = GradedBasis.from_pairs([("1", 0), ("x", 1), ("y", 1), ("xy", 2)])
    up = LinearMap.from_entries(4, [(1, 0, 1), (3, 2, 1)], 1)
    down = LinearMap.from_entries(4, [(0, 1, 1)], -1)
    assert (down @ up).shift == 0
    assert (down @ up)(Vector.basis(0)) == Vector.basis(0)
    assert up.check_shift(basis) == []
    wrong = LinearMap.from_entries(4, [(3, 0, 1)], 1)
    assert wrong.check_shift(basis) == [(3, 0)]


def test_from_entries_checks_range():
    with pytest.raises(GradingError):
        LinearMap.from_entries(2, [(2, 0, 1)])


def test_supercommutator_of_odd_maps_is_anticommutator():
    f = LinearMap.from_entries(2, [(1, 0, 1)], 1)
    g = LinearMap.from_entries(2, [(0, 1, 1)], -1)
    assert supercommutator(f, g) == LinearMap.identity(2)
    assert negate_shift((1, 0)) == (-1, 0)
    assert negate_shift(None) is None
