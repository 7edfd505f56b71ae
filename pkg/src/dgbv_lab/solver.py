"""Order-by-order Maurer-Cartan solver over the formal deformation ring.

The universal solution is ``Γ = Γ₁ + Γ₂ + ...`` with ``Γ₁ = Σ x^j e_j`` over
a harmonic basis and, in analytic mode, ``Γ_n = -δ*G R_n`` where
``R_n = ½ Σ_{p+q=n} [Γ_p • Γ_q]``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from .dgbv import DgbvAlgebra
from .errors import PreconditionError
from .graded import LinearMap, Vector
from .hodge import InnerProduct, check_lemma_conditions, cohomology_basis, hodge_theory, real_basis, require_kahler
from .linalg import Subspace, solve as solve_linear
from .scalar import HALF, I
from .superpoly import (
    SuperMonomial,
    SuperPolynomial,
    VariableSet,
    apply_operator,
    bilinear_extend,
    superpoly_multiply,
)

if TYPE_CHECKING:
    from .models.kahler import BigradedModel

LOGGER = logging.getLogger(__name__)

Mode = Literal["analytic", "normalized"]
MODES: Tuple[str, ...] = ("analytic", "normalized")


@dataclass
class Certificate:
    """Membership facts for one order: ``Γ_n ∈ Im Δ`` and, analytically, ``Γ_n ∈ Im δ*Δ``."""

    order: int
    in_image_bvop: bool
    in_image_adjoint_bvop: Optional[bool]


@dataclass
class MCSolution:
    variables: VariableSet
    classes: List[Vector]
    terms: Dict[int, SuperPolynomial]
    order: int
    mode: str = "analytic"
    active: List[int] = field(default_factory=list)
    dropped: List[int] = field(default_factory=list)
    certificates: Dict[int, Certificate] = field(default_factory=dict)

    def term(self, n: int) -> SuperPolynomial:
        return self.terms.get(n, SuperPolynomial(self.variables))

    @property
    def gamma(self) -> SuperPolynomial:
        total = SuperPolynomial(self.variables)
        for n in sorted(self.terms):
            total = total + self.terms[n]
        return total

    def term_counts(self) -> Dict[int, int]:
        return {n: len(self.term(n)) for n in range(1, self.order + 1)}

    def restrict(self, keep: Iterable[int]) -> "MCSolution":
        keep = sorted(set(keep))
        return MCSolution(
            variables=self.variables,
            classes=self.classes,
            terms={n: term.restrict(keep) for n, term in self.terms.items()},
            order=self.order,
            mode=self.mode,
            active=[j for j in self.active if j in keep],
            dropped=self.dropped,
            certificates=self.certificates,
        )


@dataclass
class ObstructionReport:
    """First order at which ``δΓ_n = -R_n`` has no solution."""

    order: int
    residual: SuperPolynomial
    harmonic: SuperPolynomial
    unsolvable: SuperPolynomial
    partial: MCSolution

    def reproject(self, projection: LinearMap) -> SuperPolynomial:
        return apply_operator(projection, self.residual)


SolveResult = Union[MCSolution, ObstructionReport]


def variables_for(algebra: DgbvAlgebra, classes: Sequence[Vector]) -> VariableSet:
    return VariableSet.from_parities([vector.parity(algebra.basis) for vector in classes])


def initial_term(algebra: DgbvAlgebra, classes: Sequence[Vector], active: Optional[Iterable[int]] = None) -> SuperPolynomial:
    """``Γ₁ = Σ x^j e_j`` with parity-matched variables."""

    chosen = list(range(len(classes)) if active is None else active)
    for j in chosen:
        if algebra.delta(classes[j]) or algebra.bvop(classes[j]):
            raise PreconditionError(f"Class {j} is not in Ker δ ∩ Ker Δ", residual=classes[j])
    variables = variables_for(algebra, classes)
    return SuperPolynomial(variables, {SuperMonomial(((j, 1),)): classes[j] for j in chosen})


def bracket_series(algebra: DgbvAlgebra, p: SuperPolynomial, q: SuperPolynomial) -> SuperPolynomial:
    """``[p • q]`` on ``K ⊗ A``."""

    return bilinear_extend(p, q, algebra.bracket_basis, algebra.parities, operation_parity=1)


def wedge_series(algebra: DgbvAlgebra, p: SuperPolynomial, q: SuperPolynomial, max_order: Optional[int] = None) -> SuperPolynomial:
    return superpoly_multiply(p, q, algebra.product, algebra.parities, max_order)


def order_residual(algebra: DgbvAlgebra, terms: Dict[int, SuperPolynomial], n: int, variables: VariableSet) -> SuperPolynomial:
    """``R_n = ½ Σ_{p+q=n, p,q≥1} [Γ_p • Γ_q]``."""

    total = SuperPolynomial(variables)
    for p in range(1, n):
        left, right = terms.get(p), terms.get(n - p)
        if left and right:
            total = total + bracket_series(algebra, left, right)
    return total.scale(HALF)


def _coefficients_in(space: Subspace, p: SuperPolynomial) -> bool:
    return all(space.contains(vector) for _, vector in p.items())


def _select_classes(
    algebra: DgbvAlgebra, classes: Sequence[Vector], variables: Optional[Iterable[int]], best_effort: bool
) -> Tuple[List[int], List[int]]:
    requested = list(range(len(classes))) if variables is None else sorted(set(variables))
    for j in requested:
        if not 0 <= j < len(classes):
            raise PreconditionError(f"Variable index {j} outside the {len(classes)} cohomology classes")
    active, dropped = [], []
    for j in requested:
        vector = classes[j]
        if algebra.delta(vector) or algebra.bvop(vector):
            if not best_effort:
                raise PreconditionError(f"Class {j} is not in Ker δ ∩ Ker Δ", residual=vector)
            dropped.append(j)
        else:
            active.append(j)
    if dropped:
        LOGGER.warning("Dropped %d harmonic classes outside Ker δ ∩ Ker Δ: %s", len(dropped), dropped)
    return active, dropped


def solve(
    algebra: DgbvAlgebra,
    ip: InnerProduct,
    order: int = 4,
    mode: str = "analytic",
    variables: Optional[Iterable[int]] = None,
    classes: Optional[Sequence[Vector]] = None,
) -> SolveResult:
    """Build ``Γ`` through x-degree ``order`` or return the first obstruction."""

    if mode not in MODES:
        raise ValueError(f"Unknown solve mode '{mode}', expected one of {MODES}")
    if order < 1:
        raise ValueError("Truncation order must be at least 1")
    classes = list(classes) if classes is not None else cohomology_basis(algebra, ip)
    conditions = check_lemma_conditions(algebra)
    best_effort = not conditions.ok
    if best_effort:
        LOGGER.warning("Conditions fail on %s; solving in best-effort mode", algebra.name)
    active, dropped = _select_classes(algebra, classes, variables, best_effort)
    gamma_one = initial_term(algebra, classes, active)
    var_set = gamma_one.variables
    solution = MCSolution(var_set, classes, {1: gamma_one}, order, mode, active, dropped)

    theory = hodge_theory(algebra.delta, ip)
    homotopy = theory.adjoint @ theory.green
    image_bvop = Subspace.image(algebra.bvop)
    image_adjoint_bvop = Subspace.image(theory.adjoint @ algebra.bvop)
    exact_part = algebra.delta @ homotopy
    delta_bvop = (algebra.delta @ algebra.bvop).to_dense()

    for n in range(2, order + 1):
        residual = order_residual(algebra, solution.terms, n, var_set)
        if mode == "analytic":
            unsolvable = residual - apply_operator(exact_part, residual)
            if unsolvable:
                return _obstruction(n, residual, unsolvable, theory.projection, solution)
            term = -apply_operator(homotopy, residual)
        else:
            potential: Dict[SuperMonomial, Vector] = {}
            for monomial, vector in residual.items():
                found = solve_linear(delta_bvop, (-vector).to_dense(algebra.dim), algebra.dim)
                if found is None:
                    unsolvable = residual - apply_operator(exact_part, residual)
                    return _obstruction(n, residual, unsolvable or residual, theory.projection, solution)
                potential[monomial] = Vector.from_dense(found)
            term = apply_operator(algebra.bvop, SuperPolynomial(var_set, potential))
        closing = apply_operator(algebra.delta, term) + residual
        if closing:
            return _obstruction(n, residual, closing, theory.projection, solution)
        if term:
            solution.terms[n] = term
        solution.certificates[n] = Certificate(
            order=n,
            in_image_bvop=_coefficients_in(image_bvop, term),
            in_image_adjoint_bvop=_coefficients_in(image_adjoint_bvop, term) if mode == "analytic" else None,
        )
        LOGGER.debug("Order %d of %s: %d terms", n, algebra.name, len(term))
    LOGGER.info("Solved %s through order %d (%s mode)", algebra.name, order, mode)
    return solution


def _obstruction(
    n: int, residual: SuperPolynomial, unsolvable: SuperPolynomial, projection: LinearMap, partial: MCSolution
) -> ObstructionReport:
    harmonic = apply_operator(projection, residual)
    LOGGER.warning("Obstruction at order %d: harmonic part has %d terms", n, len(harmonic))
    return ObstructionReport(order=n, residual=residual, harmonic=harmonic, unsolvable=unsolvable, partial=partial)


@dataclass
class VerificationReport:
    residuals: Dict[int, SuperPolynomial]
    bvop_residual: SuperPolynomial
    unit_confined: bool
    even: bool

    @property
    def ok(self) -> bool:
        return not any(self.residuals.values()) and not self.bvop_residual and self.unit_confined and self.even

    def failing_orders(self) -> List[int]:
        return sorted(n for n, residual in self.residuals.items() if residual)


def verify_mc(solution: MCSolution, algebra: DgbvAlgebra, unit_variable: int = 0) -> VerificationReport:
    """Residual ``δΓ + ½[Γ•Γ]`` per x-degree together with the normalizations."""

    residuals: Dict[int, SuperPolynomial] = {}
    for n in range(1, solution.order + 1):
        residuals[n] = apply_operator(algebra.delta, solution.term(n)) + order_residual(
            algebra, solution.terms, n, solution.variables
        )
    gamma = solution.gamma
    unit_confined = all(
        monomial.exponent(unit_variable) == 0
        for n, term in solution.terms.items()
        if n >= 2
        for monomial in term
    )
    parities = algebra.parities
    even = all(term.total_parities(parities) <= {0} for term in solution.terms.values())
    return VerificationReport(
        residuals=residuals,
        bvop_residual=apply_operator(algebra.bvop, gamma),
        unit_confined=unit_confined,
        even=even,
    )


def dolbeault_second_order(model: "BigradedModel", solution: MCSolution) -> SuperPolynomial:
    """``½√-1 G ∂̄*∂*(Γ₁∧Γ₁)`` with ``G`` the Green operator of ``□_∂̄``."""

    from .models.kahler import dolbeault_dgbv

    algebra = dolbeault_dgbv(model)
    ip = model.inner_product
    theory = hodge_theory(model.dbar, ip)
    partial_star = ip.adjoint(model.partial)
    operator = theory.green @ theory.adjoint @ partial_star
    gamma_one = solution.term(1)
    return apply_operator(operator, wedge_series(algebra, gamma_one, gamma_one)).scale(HALF * I)


@dataclass
class SimultaneousReport:
    dolbeault: VerificationReport
    mirror: VerificationReport
    derham: VerificationReport
    real: bool
    second_order_formula: bool
    mirror_solution_agrees: bool
    derham_solution_agrees: bool

    @property
    def ok(self) -> bool:
        return (
            self.dolbeault.ok
            and self.mirror.ok
            and self.derham.ok
            and self.real
            and self.second_order_formula
            and self.mirror_solution_agrees
            and self.derham_solution_agrees
        )


def real_harmonic_basis(model: "BigradedModel") -> List[Vector]:
    from .models.kahler import dolbeault_dgbv

    algebra = dolbeault_dgbv(model)
    harmonic = cohomology_basis(algebra, model.inner_product)
    return real_basis(harmonic, model.real_structure, algebra.dim)


def simultaneous_solve(model: "BigradedModel", order: int = 4) -> Tuple[MCSolution, SimultaneousReport]:
    """Solve the Dolbeault equation over a real harmonic basis and verify the other two."""

    from .models.kahler import derham_dgbv, dolbeault_dgbv, mirror_dgbv

    require_kahler(model)
    ip = model.inner_product
    classes = real_harmonic_basis(model)
    structures = {
        "dolbeault": dolbeault_dgbv(model),
        "mirror": mirror_dgbv(model),
        "derham": derham_dgbv(model),
    }
    results: Dict[str, SolveResult] = {
        name: solve(algebra, ip, order, "analytic", classes=classes) for name, algebra in structures.items()
    }
    for name, result in results.items():
        if isinstance(result, ObstructionReport):
            raise PreconditionError(f"{name} structure is obstructed at order {result.order}", residual=result.harmonic)
    gamma = results["dolbeault"]
    assert isinstance(gamma, MCSolution)
    reports = {name: verify_mc(gamma, algebra) for name, algebra in structures.items()}
    second = gamma.term(2)
    report = SimultaneousReport(
        dolbeault=reports["dolbeault"],
        mirror=reports["mirror"],
        derham=reports["derham"],
        real=gamma.gamma.conjugate(model.real_structure) == gamma.gamma,
        second_order_formula=order < 2 or second == dolbeault_second_order(model, gamma),
        mirror_solution_agrees=results["mirror"].gamma == gamma.gamma,  # type: ignore[union-attr]
        derham_solution_agrees=results["derham"].gamma == gamma.gamma,  # type: ignore[union-attr]
    )
    LOGGER.info("Simultaneous solve on %s: %s", model.name, "consistent" if report.ok else "inconsistent")
    return gamma, report
