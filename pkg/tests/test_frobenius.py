from dataclasses import replace

import pytest

from dgbv_lab.errors import LinearAlgebraError
from dgbv_lab.frobenius import (
    check_associativity,
    check_potential_integrability,
    evaluate_at_origin,
    extend_class,
    frobenius_report,
    metric_constancy_check,
    product_classes,
    product_tensor,
    representative_independence,
    symmetry_check,
)
from dgbv_lab.graded import Vector
from dgbv_lab.models.comparison import compare_structures
from dgbv_lab.solver import solve
from dgbv_lab.superpoly import UNIT_MONOMIAL, SuperMonomial, SuperPolynomial, scalar_series, series_value


@pytest.fixture
def torus_solution(torus):
    return solve(torus.dgbv, torus.inner_product, order=2)


def test_extended_class_starts_with_the_class(torus, torus_solution):
    extended = extend_class(3, torus_solution)
    assert extended.homogeneous_part(0) == SuperPolynomial.constant(
        torus_solution.variables, torus_solution.classes[3]
    )


def test_torus_frobenius_report(torus, torus_solution):
    report = frobenius_report(torus.dgbv, torus_solution)
    assert report.ok
    assert report.data.trusted_order == 1
    assert report.symmetry.checked > 0


def test_unit_row_is_the_metric(torus, torus_solution):
    data = product_tensor(torus.dgbv, torus_solution)
    assert symmetry_check(data).ok
    for j in range(data.size):
        for k in range(data.size):
            assert series_value(data.c(0, j, k)) == data.metric[j][k]


def test_triple_intersections_at_origin(torus, torus_solution):
    data = product_tensor(torus.dgbv, torus_solution)
    origin = evaluate_at_origin(data)
    top = len(torus_solution.classes) - 1
    assert origin[(0, 0, top)] == 1


def test_unit_acts_as_identity(torus, torus_solution):
    data = product_tensor(torus.dgbv, torus_solution)
    for j in range(data.size):
        products = product_classes(data, 0, j)
        assert list(products) == [j]
        assert series_value(products[j]) == 1
    assert check_associativity(data).ok


def test_exact_shift_does_not_change_the_tensor(torus, torus_solution):
    data = product_tensor(torus.dgbv, torus_solution)
    eta = SuperPolynomial.constant(torus_solution.variables, Vector.basis(1))
    assert not representative_independence(torus.dgbv, data, 0, 1, 2, eta)


def test_degenerate_metric_raises(torus, torus_solution):
    flat = torus.dgbv.with_operators(integral=Vector(), name="no-integral")
    with pytest.raises(LinearAlgebraError, match="not nice"):
        product_tensor(flat, torus_solution)


@pytest.mark.parametrize(("fixture", "order"), [("complex_torus_1", 3), ("complex_torus_2", 2)])
def test_derham_and_dolbeault_agree(fixture, order, request):
    model = request.getfixturevalue(fixture)
    report = compare_structures(model.bigraded, order=order)
    assert report.verdict == "IDENTICAL"
    assert report.first_discrepancy is None
    assert report.real_at_origin
    assert report.trusted_order == order - 1


def test_corrupted_unit_entry_breaks_associativity(torus, torus_solution):
    data = product_tensor(torus.dgbv, torus_solution)
    top = data.size - 1
    assert series_value(data.c(0, 0, top)) == 1
    doubled = scalar_series(torus_solution.variables, {UNIT_MONOMIAL: 2})
    corrupted = replace(data, tensor={**data.tensor, (0, 0, top): doubled})
    verdict = check_associativity(corrupted)
    assert not verdict.ok
    assert verdict.witness[:2] == (0, 0)
    assert verdict.discrepancy


def test_corrupted_linear_term_breaks_integrability(torus, torus_solution):
    data = product_tensor(torus.dgbv, torus_solution)
    assert check_potential_integrability(data).ok
    variables = torus_solution.variables
    bump = scalar_series(variables, {SuperMonomial(((5, 1),)): 1})
    corrupted = replace(data, tensor={**data.tensor, (0, 0, 0): data.c(0, 0, 0) + bump})
    verdict = check_potential_integrability(corrupted)
    assert not verdict.ok
    assert verdict.witness == (0, 5, 0, 0)


def test_best_effort_kodaira_thurston_data_is_not_frobenius(kodaira_thurston):
    algebra = kodaira_thurston.dgbv
    solution = solve(algebra, kodaira_thurston.inner_product, order=2)
    assert solution.term(2)
    constancy = metric_constancy_check(algebra, solution)
    assert not constancy.ok
    assert constancy.witness is not None
    report = frobenius_report(algebra, solution)
    assert not report.ok
    assert not report.associativity.ok
    assert not report.integrability.ok
