from collections import Counter

import pytest

from dgbv_lab.dgbv import cohomology_representatives
from dgbv_lab.errors import KahlerIdentityError, LinearAlgebraError, PreconditionError
from dgbv_lab.graded import GradedBasis, LinearMap, Vector
from dgbv_lab.hodge import (
    InnerProduct,
    check_kahler_identities,
    check_lemma_conditions,
    cohomology_basis,
    hard_lefschetz_check,
    hodge_decompose,
    hodge_theory,
    inclusion_report,
    is_real,
    real_basis,
    require_kahler,
)
from dgbv_lab.linalg import nullspace, rank
from dgbv_lab.models import dolbeault_dgbv
from dgbv_lab.scalar import Scalar


def _two_dim(degrees):
    return GradedBasis.from_pairs([("a", degrees[0]), ("b", degrees[1])])


def test_inner_product_rejects_non_hermitian():
    with pytest.raises(LinearAlgebraError, match="Hermitian"):
        InnerProduct(_two_dim([0, 0]), [[1, 2], [3, 1]])


def test_inner_product_rejects_mixed_gradings():
    with pytest.raises(LinearAlgebraError, match="different gradings"):
        InnerProduct(_two_dim([0, 1]), [[2, 1], [1, 2]])


def test_inner_product_rejects_indefinite():
    with pytest.raises(LinearAlgebraError, match="positive definite"):
        InnerProduct(_two_dim([0, 0]), [[1, 0], [0, -1]])


def test_inner_product_block_size_is_checked():
    with pytest.raises(LinearAlgebraError, match="2x2"):
        InnerProduct.from_blocks(_two_dim([0, 0]), {0: [[1]]})


def test_adjoint_identity(kodaira_thurston):
    delta = kodaira_thurston.dgbv.delta
    ip = InnerProduct.diagonal(kodaira_thurston.dgbv.basis, [k + 1 for k in range(delta.dim)])
    star = ip.adjoint(delta)
    for i in range(delta.dim):
        for j in range(delta.dim):
            a, b = Vector.basis(i), Vector.basis(j)
            assert ip(delta(a), b) == ip(a, star(b))


def test_hodge_decomposition_recomposes(heisenberg):
    delta = heisenberg.dgbv.delta
    ip = heisenberg.inner_product
    v = Vector.from_dense([1, 2, -1, 3, 1, 1, -2, 5])
    parts = hodge_decompose(v, delta, ip)
    assert parts.recompose() == v
    assert ip(parts.harmonic, parts.exact) == 0
    assert ip(parts.exact, parts.coexact) == 0
    assert hodge_theory(delta, ip).is_harmonic(parts.harmonic)


def test_decomposition_needs_a_differential(heisenberg):
    identity = LinearMap.identity(heisenberg.dgbv.dim)
    with pytest.raises(PreconditionError, match="square to zero"):
        hodge_decompose(Vector.basis(0), identity, heisenberg.inner_product)


def test_harmonic_space_matches_cohomology(kodaira_thurston):
    algebra = kodaira_thurston.dgbv
    report = check_lemma_conditions(algebra)
    theory = hodge_theory(algebra.delta, kodaira_thurston.inner_product)
    assert len(theory.harmonic_basis) == report.dims["H(delta)"]


@pytest.mark.parametrize("fixture", ["torus", "complex_torus_1", "complex_torus_2"])
def test_conditions_hold(fixture, request):
    report = check_lemma_conditions(request.getfixturevalue(fixture).dgbv)
    assert report.ok and report.consistent
    assert report.cohomology_dims_agree


def test_conditions_fail_on_kodaira_thurston(kodaira_thurston):
    report = check_lemma_conditions(kodaira_thurston.dgbv)
    assert not report.ok
    assert report.consistent
    assert not inclusion_report(kodaira_thurston.dgbv).ok


def test_inclusions_on_torus(torus):
    assert inclusion_report(torus.dgbv).ok


def test_heisenberg_cohomology_by_degree(heisenberg):
    algebra = heisenberg.dgbv
    degrees = Counter(algebra.basis[v.support()[0]].degree for v in cohomology_representatives(algebra))
    assert [degrees[k] for k in range(4)] == [1, 2, 2, 1]
    assert check_lemma_conditions(algebra).dims["H(delta)"] == 6


def test_lefschetz_on_torus(torus):
    report = hard_lefschetz_check(torus.dgbv, torus.omega)
    assert report.ok
    assert report.half_dimension == 2
    assert [row.source_dim for row in report.rows] == [6, 4, 1]


def test_lefschetz_fails_on_kodaira_thurston_at_k1(kodaira_thurston):
    report = hard_lefschetz_check(kodaira_thurston.dgbv, kodaira_thurston.omega)
    assert not report.ok
    assert report.rows[0].ok
    assert not report.rows[1].ok
    assert report.rows[1].source_dim == report.rows[1].target_dim == 3


def test_lefschetz_is_not_applicable_in_odd_top_degree(heisenberg):
    report = hard_lefschetz_check(heisenberg.dgbv, heisenberg.exterior.monomial(0, 1))
    assert not report.applicable
    assert report.rows == []
    assert "odd" in report.reason


def test_lefschetz_preconditions(torus):
    with pytest.raises(PreconditionError, match="degree 2"):
        hard_lefschetz_check(torus.dgbv, torus.exterior.generator(0))


def test_lefschetz_on_complex_tori(complex_torus_1, complex_torus_2):
    for model in (complex_torus_1, complex_torus_2):
        assert hard_lefschetz_check(model.dgbv, model.omega, model.bigraded.d).ok


def test_kahler_identities_on_complex_tori(complex_torus_1, complex_torus_2):
    for model in (complex_torus_1, complex_torus_2):
        report = check_kahler_identities(model.bigraded)
        assert report.ok, [check.name for check in report.failures]


def test_perturbed_metric_breaks_sl2(perturbed_kahler):
    report = check_kahler_identities(perturbed_kahler)
    assert "lefschetz-sl2" in [check.name for check in report.failures]
    with pytest.raises(KahlerIdentityError, match="lefschetz-sl2"):
        require_kahler(perturbed_kahler)
    with pytest.raises(KahlerIdentityError):
        dolbeault_dgbv(perturbed_kahler)


def test_real_basis_of_cohomology(complex_torus_1):
    model = complex_torus_1.bigraded
    harmonic = cohomology_basis(complex_torus_1.dgbv, model.inner_product)
    assert harmonic[0] == Vector.basis(0)
    real = real_basis(harmonic, model.real_structure, model.dim)
    assert len(real) == len(harmonic) == 4
    assert all(is_real(v, model.real_structure) for v in real)
    assert is_real(model.omega, model.real_structure)


@pytest.mark.parametrize("fixture", ["heisenberg", "kodaira_thurston", "composite"])
def test_green_inverts_the_laplacian_off_harmonics(fixture, request):
    model = request.getfixturevalue(fixture)
    theory = hodge_theory(model.dgbv.delta, model.inner_product)
    identity = LinearMap.identity(model.dgbv.dim)
    assert theory.green @ theory.laplacian + theory.projection == identity
    assert theory.laplacian @ theory.green + theory.projection == identity


@pytest.mark.parametrize("fixture", ["complex_torus_1", "complex_torus_2"])
def test_partial_green_operators_are_twice_the_de_rham_one(fixture, request):
    model = request.getfixturevalue(fixture).bigraded
    ip = model.inner_product
    green = hodge_theory(model.d, ip).green
    assert hodge_theory(model.dbar, ip).green == green.scale(2)
    assert hodge_theory(model.partial, ip).green == green.scale(2)


def test_hodge_theory_cache_respects_the_shift(kodaira_thurston):
    delta = kodaira_thurston.dgbv.delta
    ip = kodaira_thurston.inner_product
    assert hodge_theory(delta, ip).adjoint.shift == -1
    assert hodge_theory(delta.with_shift(None), ip).adjoint.shift is None
    assert hodge_theory(delta, ip) is hodge_theory(delta, ip)


def _closed_and_exact(dense, basis, degree):
    """Cycles and boundaries in one degree, as dense row lists."""

    dim = len(basis)
    columns = [j for j in range(dim) if basis[j].degree == degree]
    below = [j for j in range(dim) if basis[j].degree == degree - 1]
    block = [[dense[i][j] for j in columns] for i in range(dim)]
    cycles = []
    for solution in nullspace(block, len(columns)):
        row = [Scalar(0)] * dim
        for position, value in zip(columns, solution):
            row[position] = value
        cycles.append(row)
    boundaries = [[dense[i][j] for i in range(dim)] for j in below]
    return cycles, boundaries


def _lefschetz_oracle(algebra, omega, d):
    basis = algebra.basis
    dense = d.to_dense()
    n = basis.top_degree() // 2
    rows = []
    for k in range(n + 1):
        source_cycles, source_boundaries = _closed_and_exact(dense, basis, n - k)
        target_cycles, target_boundaries = _closed_and_exact(dense, basis, n + k)
        power = algebra.algebra.power(omega, k)
        images = [algebra.wedge(power, Vector.from_dense(z)).to_dense(algebra.dim) for z in source_cycles]
        exact = rank(target_boundaries)
        rows.append(
            (
                len(source_cycles) - rank(source_boundaries),
                len(target_cycles) - exact,
                rank(images + target_boundaries) - exact,
            )
        )
    return rows


@pytest.mark.parametrize(
    "fixture", ["torus", "kodaira_thurston", "complex_torus_1", "complex_torus_2"]
)
def test_lefschetz_matches_brute_force_ranks(fixture, request):
    model = request.getfixturevalue(fixture)
    d = model.bigraded.d if model.bigraded is not None else model.dgbv.delta
    report = hard_lefschetz_check(model.dgbv, model.omega, d)
    assert [(row.source_dim, row.target_dim, row.rank) for row in report.rows] == _lefschetz_oracle(
        model.dgbv, model.omega, d
    )
