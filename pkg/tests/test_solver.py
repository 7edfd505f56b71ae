from dataclasses import replace

import pytest

from dgbv_lab.errors import PreconditionError
from dgbv_lab.hodge import hodge_theory
from dgbv_lab.linalg import solve as solve_linear
from dgbv_lab.solver import (
    MCSolution,
    ObstructionReport,
    initial_term,
    order_residual,
    simultaneous_solve,
    solve,
    verify_mc,
)
from dgbv_lab.superpoly import SuperMonomial, SuperPolynomial, apply_operator


def test_torus_solution_stops_at_first_order(torus):
    solution = solve(torus.dgbv, torus.inner_product, order=4)
    assert isinstance(solution, MCSolution)
    assert len(solution.classes) == 16
    assert solution.term_counts() == {1: 16, 2: 0, 3: 0, 4: 0}
    assert solution.gamma == solution.term(1)
    assert verify_mc(solution, torus.dgbv).ok
    assert all(cert.in_image_bvop and cert.in_image_adjoint_bvop for cert in solution.certificates.values())


@pytest.mark.parametrize("fixture", ["complex_torus_1", "complex_torus_2"])
def test_complex_tori_solve_with_certificates(fixture, request):
    model = request.getfixturevalue(fixture)
    solution = solve(model.dgbv, model.inner_product, order=3)
    assert isinstance(solution, MCSolution)
    assert sorted(solution.certificates) == [2, 3]
    assert verify_mc(solution, model.dgbv).ok
    assert not solution.dropped


def test_composite_is_obstructed_at_order_two(composite):
    algebra = composite.dgbv
    result = solve(algebra, composite.inner_product, order=3)
    assert isinstance(result, ObstructionReport)
    assert result.order == 2
    assert result.harmonic
    assert result.unsolvable
    projection = hodge_theory(algebra.delta, composite.inner_product).projection
    assert result.reproject(projection) == result.harmonic
    assert sorted(result.partial.terms) == [1]


def test_composite_drops_classes_outside_both_kernels(composite):
    result = solve(composite.dgbv, composite.inner_product, order=2)
    t1t2 = composite.exterior.index((0, 1))
    assert result.partial.dropped == [t1t2]


def test_obstruction_residual_is_the_order_two_bracket(composite):
    algebra = composite.dgbv
    result = solve(algebra, composite.inner_product, order=2)
    expected = order_residual(algebra, result.partial.terms, 2, result.partial.variables)
    assert result.residual == expected


def test_normalized_mode_on_torus(torus):
    solution = solve(torus.dgbv, torus.inner_product, order=3, mode="normalized")
    assert solution.mode == "normalized"
    assert all(cert.in_image_adjoint_bvop is None for cert in solution.certificates.values())
    assert solution.gamma == solve(torus.dgbv, torus.inner_product, order=3).gamma


def test_invalid_arguments(torus):
    with pytest.raises(ValueError, match="mode"):
        solve(torus.dgbv, torus.inner_product, mode="symbolic")
    with pytest.raises(ValueError, match="at least 1"):
        solve(torus.dgbv, torus.inner_product, order=0)
    with pytest.raises(PreconditionError, match="outside"):
        solve(torus.dgbv, torus.inner_product, variables=[99])


def test_initial_term_requires_closed_classes(composite):
    ext = composite.exterior
    classes = [ext.generator(0), ext.monomial(0, 1)]
    assert initial_term(composite.dgbv, classes, active=[0])
    with pytest.raises(PreconditionError, match="Ker"):
        initial_term(composite.dgbv, classes)


def test_restricted_solution_keeps_chosen_variables(torus):
    solution = solve(torus.dgbv, torus.inner_product, order=2)
    small = solution.restrict([0, 3, 5])
    assert small.active == [0, 3, 5]
    used = {v for monomial in small.term(1) for v in monomial.variables_used()}
    assert used == {0, 3, 5}


def test_variable_subset(torus):
    solution = solve(torus.dgbv, torus.inner_product, order=2, variables=[1, 2])
    assert solution.active == [1, 2]
    assert len(solution.term(1)) == 2


def test_solutions_are_deterministic(complex_torus_1):
    first = solve(complex_torus_1.dgbv, complex_torus_1.inner_product, order=3)
    second = solve(complex_torus_1.dgbv, complex_torus_1.inner_product, order=3)
    assert first.gamma == second.gamma
    assert first.classes == second.classes


def test_simultaneous_solve_on_complex_curve(complex_torus_1):
    solution, report = simultaneous_solve(complex_torus_1.bigraded, order=3)
    assert report.ok
    assert report.real
    assert report.mirror_solution_agrees and report.derham_solution_agrees
    assert solution.order == 3


def test_simultaneous_solve_rejects_non_kahler(perturbed_kahler):
    with pytest.raises(PreconditionError):
        simultaneous_solve(perturbed_kahler, order=2)


def test_kodaira_thurston_second_order_term(kodaira_thurston):
    algebra = kodaira_thurston.dgbv
    solution = solve(algebra, kodaira_thurston.inner_product, order=2)
    assert isinstance(solution, MCSolution)
    e3 = kodaira_thurston.exterior.generator(2)
    expected = SuperPolynomial(solution.variables, {SuperMonomial(((3, 1), (6, 1))): e3})
    assert solution.term(2) == expected
    assert verify_mc(solution, algebra).failing_orders() == []


def test_perturbed_second_order_term_fails_verification(kodaira_thurston):
    algebra = kodaira_thurston.dgbv
    solution = solve(algebra, kodaira_thurston.inner_product, order=2)
    doubled = replace(solution, terms={1: solution.term(1), 2: solution.term(2).scale(2)})
    report = verify_mc(doubled, algebra)
    assert not report.ok
    assert report.failing_orders() == [2]
    assert report.residuals[2] == apply_operator(algebra.delta, solution.term(2))


def test_composite_obstruction_agrees_with_a_direct_linear_solve(composite):
    algebra = composite.dgbv
    ext = composite.exterior
    result = solve(algebra, composite.inner_product, order=2)
    partial = result.partial
    first, second = partial.classes.index(ext.generator(0)), partial.classes.index(ext.generator(1))
    monomial = SuperMonomial(((first, 1), (second, 1)))
    eta = ext.generator(2)
    # ½([x θ1 • y θ2] + [y θ2 • x θ1]) = -xy η
    assert result.residual.coefficient(monomial) == -eta
    # δ = 0, so δΓ₂ = -R₂ is solvable only where R₂ vanishes.
    delta = algebra.delta.to_dense()
    assert solve_linear(delta, eta.to_dense(algebra.dim), algebra.dim) is None
    for _, vector in result.residual.items():
        assert solve_linear(delta, (-vector).to_dense(algebra.dim), algebra.dim) is None
    assert result.harmonic.coefficient(monomial) == -eta
