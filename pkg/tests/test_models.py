import pytest

from dgbv_lab.dgbv import check_axioms
from dgbv_lab.errors import GradingError, PreconditionError
from dgbv_lab.graded import Vector
from dgbv_lab.models import (
    LieAlgebraData,
    bigraded_kahler_model,
    chevalley_eilenberg_model,
    check_contraction_identity,
    check_delta_integral,
    contraction_operator,
    derham_dgbv,
    exterior_algebra,
    koszul_delta,
    list_models,
    load_bundled,
    mirror_dgbv,
)
from dgbv_lab.scalar import Scalar


def test_exterior_monomial_signs():
    ext = exterior_algebra(["a", "b", "c"])
    assert ext.dim == 8
    assert ext.monomial(1, 0) == -ext.monomial(0, 1)
    assert not ext.monomial(0, 0)
    assert ext.monomial(2, 0, 1) == ext.monomial(0, 1, 2)
    assert ext.monomial(1, 0, 2) == -ext.monomial(0, 1, 2)
    assert ext.basis[ext.index((0, 2))].name == "a^c"
    assert ext.basis.top_degree() == 3


def test_exterior_rejects_duplicate_generators():
    with pytest.raises(GradingError):
        exterior_algebra(["a", "a"])


def test_interior_product_sign():
    ext = exterior_algebra(["a", "b", "c"])
    assert ext.interior(0)(ext.monomial(0, 1)) == ext.generator(1)
    assert ext.interior(1)(ext.monomial(0, 1)) == -ext.generator(0)


def test_contraction_lowers_degree_by_two():
    ext = exterior_algebra(["a", "b", "c", "d"])
    contraction = contraction_operator(ext, {(0, 1): 1, (2, 3): 1})
    assert contraction(ext.monomial(0, 1)) == Vector.basis(0, -1)
    assert contraction(ext.monomial(0, 1, 2, 3)) == -(ext.monomial(2, 3) + ext.monomial(0, 1))
    with pytest.raises(GradingError, match="diagonal"):
        contraction_operator(ext, {(1, 1): 1})


def test_structure_constants_validation():
    with pytest.raises(PreconditionError, match="antisymmetry"):
        LieAlgebraData.from_constants(3, {(0, 0, 1): 1})
    with pytest.raises(PreconditionError, match="out of range"):
        LieAlgebraData.from_constants(3, {(0, 1, 5): 1})
    lie = LieAlgebraData.from_constants(3, {(1, 0, 2): 1})
    assert lie.constants == {(0, 1, 2): Scalar(-1)}
    assert lie.bracket(1, 0) == {2: Scalar(1)}


def test_jacobi_failure_is_rejected():
    lie = LieAlgebraData.from_constants(3, {(0, 1, 2): 1, (1, 2, 0): 1, (0, 2, 0): 1})
    assert not lie.is_lie
    with pytest.raises(PreconditionError, match="Jacobi"):
        chevalley_eilenberg_model(lie)


def test_heisenberg_differential(heisenberg):
    ext = heisenberg.exterior
    assert heisenberg.lie.is_lie
    assert heisenberg.dgbv.delta(ext.generator(2)) == -ext.monomial(0, 1)
    assert not heisenberg.dgbv.delta(ext.generator(0))


def test_non_poisson_bivector_is_rejected(heisenberg):
    ce = chevalley_eilenberg_model(heisenberg.lie)
    with pytest.raises(PreconditionError, match="Poisson"):
        koszul_delta(ce.exterior, {(0, 1): 1}, ce.d, heisenberg.lie)


def test_koszul_identities_on_kodaira_thurston(kodaira_thurston):
    ext = kodaira_thurston.exterior
    algebra = kodaira_thurston.dgbv
    assert check_contraction_identity(ext, algebra.integral, kodaira_thurston.bivector).ok
    report = check_delta_integral(ext, algebra.integral, algebra.bvop)
    assert report.ok and report.checked == ext.dim**2
    assert not algebra.bvop @ algebra.bvop
    assert algebra.bvop


def test_torus_operators_vanish(torus):
    assert not torus.dgbv.delta and not torus.dgbv.bvop
    assert torus.dgbv.dim == 16


def test_bundled_catalogue():
    assert list_models() == [
        "torus-4",
        "heisenberg",
        "kodaira-thurston",
        "complex-torus-1",
        "complex-torus-2",
        "bv-composite",
    ]
    with pytest.raises(KeyError, match="available"):
        load_bundled("klein-bottle")


def test_complex_torus_integrals(complex_torus_1, complex_torus_2):
    top_1 = complex_torus_1.dgbv.dim - 1
    top_2 = complex_torus_2.dgbv.dim - 1
    assert complex_torus_1.dgbv.integrate(Vector.basis(top_1)) == Scalar(0, -2)
    assert complex_torus_2.dgbv.integrate(Vector.basis(top_2)) == Scalar(4)


def test_complex_torus_real_structure(complex_torus_1):
    model = complex_torus_1.bigraded
    dz, dzb = Vector.basis(1), Vector.basis(2)
    assert model.real_structure(dz) == dzb
    assert model.real_structure(dzb) == dz
    assert model.conjugate(dz.scale(Scalar(0, 1))) == dzb.scale(Scalar(0, -1))
    assert not model.violations()


def test_three_structures_on_complex_surface(complex_torus_2):
    model = complex_torus_2.bigraded
    for algebra in (mirror_dgbv(model), derham_dgbv(model)):
        assert check_axioms(algebra).ok


def test_kahler_model_rejects_bad_arguments():
    with pytest.raises(ValueError, match="at least 1"):
        bigraded_kahler_model(0)
    with pytest.raises(ValueError, match="weights"):
        bigraded_kahler_model(1, weights=[1, 2])
