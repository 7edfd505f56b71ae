"""Formal Frobenius manifold data extracted from a Maurer-Cartan solution.

Classes are extended along ``Γ`` by supercontraction, ``ē_jΓ = ∂Γ/∂x^j``.
The metric is ``g_ij = ∫ e_i∧e_j`` and the product tensor is the triple
integral ``c_ijk = ∫ (ē_iΓ)∧(ē_jΓ)∧(ē_kΓ)``; a tensor built from ``Γ``
truncated at ``N`` is trusted through x-degree ``N - 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .dgbv import DgbvAlgebra, pairing
from .errors import LinearAlgebraError
from .graded import Vector
from .linalg import Matrix, inverse
from .scalar import Scalar, sign
from .solver import MCSolution, bracket_series, wedge_series
from .superpoly import (
    SuperPolynomial,
    apply_operator,
    integrate,
    series_multiply,
    series_value,
    supercontract,
)

LOGGER = logging.getLogger(__name__)

Index3 = Tuple[int, int, int]


def extend_class(j: int, solution: MCSolution) -> SuperPolynomial:
    """``ē_jΓ``; its x-degree-0 term is ``e_j``."""

    return supercontract(j, solution.gamma)


def twisted_differential(algebra: DgbvAlgebra, solution: MCSolution, p: SuperPolynomial) -> SuperPolynomial:
    """``δ_Γ p = δp + [Γ • p]``."""

    return apply_operator(algebra.delta, p) + bracket_series(algebra, solution.gamma, p)


def closedness_residual(algebra: DgbvAlgebra, solution: MCSolution, j: int) -> SuperPolynomial:
    """``δ_Γ(ē_jΓ)`` through the trusted order ``N - 1``."""

    return twisted_differential(algebra, solution, extend_class(j, solution)).truncate(solution.order - 1)


@dataclass
class FrobeniusData:
    solution: MCSolution
    metric: Matrix
    metric_inverse: Matrix
    tensor: Dict[Index3, SuperPolynomial]
    parities: Tuple[int, ...]

    @property
    def order(self) -> int:
        return self.solution.order

    @property
    def trusted_order(self) -> int:
        return self.solution.order - 1

    @property
    def size(self) -> int:
        return len(self.parities)

    def c(self, i: int, j: int, k: int) -> SuperPolynomial:
        return self.tensor.get((i, j, k), SuperPolynomial(self.solution.variables))


def _extensions(solution: MCSolution) -> List[SuperPolynomial]:
    return [extend_class(j, solution) for j in range(len(solution.classes))]


def metric_matrix(algebra: DgbvAlgebra, classes: List[Vector]) -> Matrix:
    return [[pairing(algebra, a, b) for b in classes] for a in classes]


def product_tensor(algebra: DgbvAlgebra, solution: MCSolution) -> FrobeniusData:
    """Triple integrals of the extended classes, truncated at ``N - 1``."""

    classes = solution.classes
    metric = metric_matrix(algebra, classes)
    try:
        metric_inverse = inverse(metric)
    except LinearAlgebraError as exc:
        raise LinearAlgebraError("Metric on cohomology is degenerate: the integral is not nice") from exc
    trusted = solution.order - 1
    extended = _extensions(solution)
    tensor: Dict[Index3, SuperPolynomial] = {}
    n = len(classes)
    for i in range(n):
        for j in range(n):
            pair = wedge_series(algebra, extended[i], extended[j], trusted)
            for k in range(n):
                value = integrate(wedge_series(algebra, pair, extended[k], trusted), algebra.integral)
                if value:
                    tensor[(i, j, k)] = value
    parities = tuple(vector.parity(algebra.basis) for vector in classes)
    LOGGER.info("Product tensor of %s: %d nonzero entries, trusted through order %d", algebra.name, len(tensor), trusted)
    return FrobeniusData(solution, metric, metric_inverse, tensor, parities)


@dataclass
class Verdict:
    ok: bool
    checked: int
    trusted_order: int
    witness: Optional[Tuple[int, ...]] = None
    discrepancy: Optional[SuperPolynomial] = None


class _Tally:
    def __init__(self, trusted_order: int) -> None:
        self.verdict = Verdict(ok=True, checked=0, trusted_order=trusted_order)

    def expect_zero(self, value: SuperPolynomial, witness: Tuple[int, ...]) -> None:
        self.verdict.checked += 1
        if value and self.verdict.ok:
            self.verdict.ok = False
            self.verdict.witness = witness
            self.verdict.discrepancy = value


def metric_constancy_check(algebra: DgbvAlgebra, solution: MCSolution) -> Verdict:
    """``∫(ē_iΓ)∧(ē_jΓ) = ∫ e_i∧e_j`` identically in x through order ``2N - 2``."""

    order = 2 * solution.order - 2
    tally = _Tally(order)
    extended = _extensions(solution)
    classes = solution.classes
    for i in range(len(classes)):
        for j in range(len(classes)):
            paired = integrate(wedge_series(algebra, extended[i], extended[j], order), algebra.integral)
            constant = SuperPolynomial.constant(solution.variables, Vector({0: pairing(algebra, classes[i], classes[j])}))
            tally.expect_zero(paired - constant, (i, j))
    return tally.verdict


def symmetry_check(data: FrobeniusData) -> Verdict:
    """``c_ijk = (-1)^{|i||j|} c_jik = (-1)^{|j||k|} c_ikj`` and ``c_0jk = g_jk``."""

    tally = _Tally(data.trusted_order)
    p = data.parities
    variables = data.solution.variables
    for i in range(data.size):
        for j in range(data.size):
            for k in range(data.size):
                c = data.c(i, j, k)
                tally.expect_zero(c - data.c(j, i, k).scale(sign(p[i] * p[j])), (i, j, k))
                tally.expect_zero(c - data.c(i, k, j).scale(sign(p[j] * p[k])), (i, j, k))
    for j in range(data.size):
        for k in range(data.size):
            constant = SuperPolynomial.constant(variables, Vector({0: data.metric[j][k]}))
            tally.expect_zero(data.c(0, j, k) - constant, (0, j, k))
    return tally.verdict


def product_classes(data: FrobeniusData, i: int, j: int) -> Dict[int, SuperPolynomial]:
    """``e_i∘e_j = Σ_l P^l_ij e_l`` with ``P^l_ij = Σ_k c_ijk g^{kl}``."""

    result: Dict[int, SuperPolynomial] = {}
    for l in range(data.size):
        total = SuperPolynomial(data.solution.variables)
        for k in range(data.size):
            weight = data.metric_inverse[k][l]
            if weight:
                total = total + data.c(i, j, k).scale(weight)
        if total:
            result[l] = total
    return result


def check_associativity(data: FrobeniusData) -> Verdict:
    """``Σ_l P^l_ij P^m_lk = Σ_l (-1)^{|i|(|j|+|k|+|l|)} P^l_jk P^m_il`` through the trusted order."""

    tally = _Tally(data.trusted_order)
    trusted = data.trusted_order
    p = data.parities
    n = data.size
    products = {(i, j): product_classes(data, i, j) for i in range(n) for j in range(n)}
    zero = SuperPolynomial(data.solution.variables)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left: Dict[int, SuperPolynomial] = {}
                for l, p_ij in products[(i, j)].items():
                    for m, p_lk in products[(l, k)].items():
                        left[m] = left.get(m, zero) + series_multiply(p_ij, p_lk, trusted)
                right: Dict[int, SuperPolynomial] = {}
                for l, p_jk in products[(j, k)].items():
                    factor = sign(p[i] * (p[j] + p[k] + p[l]))
                    for m, p_il in products[(i, l)].items():
                        right[m] = right.get(m, zero) + series_multiply(p_jk, p_il, trusted).scale(factor)
                for m in range(n):
                    tally.expect_zero(left.get(m, zero) - right.get(m, zero), (i, j, k, m))
    return tally.verdict


def check_potential_integrability(data: FrobeniusData) -> Verdict:
    """``∂_l c_ijk = (-1)^{|l||i|} ∂_i c_ljk`` through order ``N - 2``."""

    order = data.order - 2
    tally = _Tally(order)
    p = data.parities
    n = data.size
    for l in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = supercontract(l, data.c(i, j, k)).truncate(order)
                    rhs = supercontract(i, data.c(l, j, k)).truncate(order).scale(sign(p[l] * p[i]))
                    tally.expect_zero(lhs - rhs, (l, i, j, k))
    return tally.verdict


def representative_independence(
    algebra: DgbvAlgebra, data: FrobeniusData, i: int, j: int, k: int, eta: SuperPolynomial
) -> SuperPolynomial:
    """Change in ``c_ijk`` when ``δ_Γη`` is added to ``(ē_iΓ)∧(ē_jΓ)``; zero through the trusted order."""

    solution = data.solution
    trusted = data.trusted_order
    extended = _extensions(solution)
    pair = wedge_series(algebra, extended[i], extended[j], trusted)
    shifted = pair + twisted_differential(algebra, solution, eta).truncate(trusted)
    value = integrate(wedge_series(algebra, shifted, extended[k], trusted), algebra.integral)
    return value - data.c(i, j, k)


def evaluate_at_origin(data: FrobeniusData) -> Dict[Index3, Scalar]:
    """``c_ijk(0)``: the triple intersection numbers of the cohomology ring."""

    values = {}
    for index, series in data.tensor.items():
        value = series_value(series)
        if value:
            values[index] = value
    return values


@dataclass
class FrobeniusReport:
    data: FrobeniusData
    metric_constancy: Verdict
    symmetry: Verdict
    associativity: Verdict
    integrability: Verdict
    closedness: Dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            self.metric_constancy.ok
            and self.symmetry.ok
            and self.associativity.ok
            and self.integrability.ok
            and all(self.closedness.values())
        )


def frobenius_report(algebra: DgbvAlgebra, solution: MCSolution) -> FrobeniusReport:
    data = product_tensor(algebra, solution)
    return FrobeniusReport(
        data=data,
        metric_constancy=metric_constancy_check(algebra, solution),
        symmetry=symmetry_check(data),
        associativity=check_associativity(data),
        integrability=check_potential_integrability(data),
        closedness={j: not closedness_residual(algebra, solution, j) for j in range(len(solution.classes))},
    )
