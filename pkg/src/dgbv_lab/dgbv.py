"""dGBV algebras: wedge structure constants, δ, Δ, the generated bracket and the integral."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import GradingError, PreconditionError
from .graded import GradedBasis, LinearMap, Shift, Vector, accumulate
from .linalg import Subspace, rank
from .scalar import HALF, ZERO, Scalar, sign

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    """Graded commutative algebra given by structure constants ``e_i ∧ e_j``."""

    basis: GradedBasis
    table: Mapping[Tuple[int, int], Vector]
    unit: int = 0

    @property
    def dim(self) -> int:
        return self.basis.dim

    def product(self, i: int, j: int) -> Vector:
        return self.table.get((i, j), _EMPTY)

    def wedge(self, a: Vector, b: Vector) -> Vector:
        result: Dict[int, Scalar] = {}
        for i, ai in a.items():
            self._check_index(i)
            for j, bj in b.items():
                self._check_index(j)
                image = self.table.get((i, j))
                if image:
                    accumulate(result, image, ai * bj)
        return Vector(result)

    def left_multiplication(self, a: Vector) -> LinearMap:
        shift: Shift | None = a.grading(self.basis) if a else 0
        return LinearMap(self.dim, {j: self.wedge(a, Vector.basis(j)) for j in range(self.dim)}, shift)

    def power(self, a: Vector, exponent: int) -> Vector:
        result = Vector.basis(self.unit)
        for _ in range(exponent):
            result = self.wedge(a, result)
        return result

    def degree_violations(self) -> List[Tuple[int, int]]:
        violations = []
        for (i, j), image in self.table.items():
            expected = _add_grading(self.basis[i].grading, self.basis[j].grading)
            if any(self.basis[k].grading != expected for k, _ in image.items()):
                violations.append((i, j))
        return sorted(violations)

    def _check_index(self, position: int) -> None:
        if not 0 <= position < self.dim:
            raise GradingError(f"Index {position} outside the algebra of dimension {self.dim}")


_EMPTY = Vector()


def _add_grading(a: Shift, b: Shift) -> Shift:
    if isinstance(a, tuple) and isinstance(b, tuple):
        return (a[0] + b[0], a[1] + b[1])
    return a + b  # type: ignore[operator]


@dataclass(frozen=True, eq=False)
class DgbvAlgebra:
    """The quadruple ``(A, ∧, δ, Δ)`` plus an integral covector.

    The bracket is always the one generated by ``bvop``; its basis table is
    computed once on construction.
    """

    algebra: GradedAlgebra
    delta: LinearMap
    bvop: LinearMap
    integral: Vector
    name: str = "unnamed"
    _brackets: Dict[Tuple[int, int], Vector] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for label, operator in (("delta", self.delta), ("bvop", self.bvop)):
            if operator.dim != self.algebra.dim:
                raise GradingError(
                    f"Operator '{label}' has dimension {operator.dim}, algebra has {self.algebra.dim}"
                )
        for i in range(self.dim):
            for j in range(self.dim):
                value = self._generated_bracket(i, j)
                if value:
                    self._brackets[(i, j)] = value

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def basis(self) -> GradedBasis:
        return self.algebra.basis

    @property
    def parities(self) -> Tuple[int, ...]:
        return self.basis.parities

    def wedge(self, a: Vector, b: Vector) -> Vector:
        return self.algebra.wedge(a, b)

    def product(self, i: int, j: int) -> Vector:
        return self.algebra.product(i, j)

    def _generated_bracket(self, i: int, j: int) -> Vector:
        e_i, e_j = Vector.basis(i), Vector.basis(j)
        p = self.basis.parity(i)
        delta = self.bvop
        raw = (
            delta(self.algebra.product(i, j))
            - self.wedge(delta.column(i), e_j)
            - self.wedge(e_i, delta.column(j)).scale(sign(p))
        )
        return raw.scale(sign(p))

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self._brackets.get((i, j), _EMPTY)

    def schouten_basis(self, i: int, j: int) -> Vector:
        """Covariant bracket ``{e_i, e_j} = (-1)^{|e_i|-1}[e_i • e_j]``."""

        return self.bracket_basis(i, j).scale(-sign(self.basis.parity(i)))

    def bracket(self, a: Vector, b: Vector) -> Vector:
        return _bilinear(a, b, self.bracket_basis)

    def schouten(self, a: Vector, b: Vector) -> Vector:
        return _bilinear(a, b, self.schouten_basis)

    def integrate(self, a: Vector) -> Scalar:
        total = ZERO
        for position, value in a.items():
            weight = self.integral[position]
            if weight:
                total = total + value * weight
        return total

    def adjoint_action(self, a: Vector) -> LinearMap:
        """``[a • ·]`` as a linear map."""

        return LinearMap(self.dim, {j: self.bracket(a, Vector.basis(j)) for j in range(self.dim)}, None)

    def with_operators(
        self,
        delta: LinearMap | None = None,
        bvop: LinearMap | None = None,
        integral: Vector | None = None,
        name: str | None = None,
    ) -> "DgbvAlgebra":
        return DgbvAlgebra(
            algebra=self.algebra,
            delta=delta if delta is not None else self.delta,
            bvop=bvop if bvop is not None else self.bvop,
            integral=integral if integral is not None else self.integral,
            name=name or self.name,
        )


def _bilinear(a: Vector, b: Vector, table) -> Vector:
    result: Dict[int, Scalar] = {}
    for i, ai in a.items():
        for j, bj in b.items():
            image = table(i, j)
            if image:
                accumulate(result, image, ai * bj)
    return Vector(result)


def wedge(algebra: DgbvAlgebra | GradedAlgebra, a: Vector, b: Vector) -> Vector:
    return algebra.wedge(a, b)


def gerstenhaber_bracket(algebra: DgbvAlgebra, a: Vector, b: Vector) -> Vector:
    """``[a•b] = (-1)^{|a|}(Δ(a∧b) - Δa∧b - (-1)^{|a|} a∧Δb)``, extended bilinearly over the basis."""

    return algebra.bracket(a, b)


def schouten_bracket(algebra: DgbvAlgebra, a: Vector, b: Vector) -> Vector:
    """``{a, b} = Δa∧b + (-1)^{|a|} a∧Δb - Δ(a∧b)``."""

    return algebra.schouten(a, b)


def pairing(algebra: DgbvAlgebra, a: Vector, b: Vector) -> Scalar:
    """``(a, b) = ∫ a∧b``."""

    return algebra.integrate(algebra.wedge(a, b))


@dataclass
class AxiomCheck:
    name: str
    ok: bool
    checked: int
    witness: Optional[Tuple[int, ...]] = None
    discrepancy: Optional[Vector] = None


@dataclass
class AxiomReport:
    checks: List[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    @property
    def failures(self) -> List[AxiomCheck]:
        return [check for check in self.checks if not check.ok]

    def get(self, name: str) -> AxiomCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


class _Checker:
    def __init__(self, name: str) -> None:
        self.name = name
        self.checked = 0
        self.witness: Optional[Tuple[int, ...]] = None
        self.discrepancy: Optional[Vector] = None

    def expect_zero(self, value: Vector, witness: Tuple[int, ...]) -> None:
        self.checked += 1
        if value and self.witness is None:
            self.witness = witness
            self.discrepancy = value

    def result(self) -> AxiomCheck:
        return AxiomCheck(self.name, self.witness is None, self.checked, self.witness, self.discrepancy)


def _is_odd_operator(f: LinearMap, parities: Sequence[int]) -> Optional[Tuple[int, int]]:
    for i, j, _ in f.entries():
        if parities[i] == parities[j]:
            return (i, j)
    return None


def check_axioms(algebra: DgbvAlgebra) -> AxiomReport:
    """Exhaustively verify the dGBV axioms over basis pairs and triples."""

    A = algebra
    n = A.dim
    p = A.parities
    e = [Vector.basis(i) for i in range(n)]
    report = AxiomReport()

    degrees = _Checker("wedge-degrees")
    for i, j in A.algebra.degree_violations():
        degrees.expect_zero(A.product(i, j), (i, j))
    degrees.checked = len(A.algebra.table)
    report.checks.append(degrees.result())

    for label, operator in (("delta", A.delta), ("bvop", A.bvop)):
        shifts = _Checker(f"{label}-shift")
        for i, j in operator.check_shift(A.basis):
            shifts.expect_zero(Vector.basis(i, operator.entry(i, j)), (i, j))
        shifts.checked += 1
        report.checks.append(shifts.result())
        odd = _Checker(f"{label}-odd")
        witness = _is_odd_operator(operator, p)
        if witness is not None:
            odd.expect_zero(Vector.basis(witness[0], operator.entry(*witness)), witness)
        odd.checked += 1
        report.checks.append(odd.result())

    unit = _Checker("unit")
    for i in range(n):
        unit.expect_zero(A.wedge(e[A.algebra.unit], e[i]) - e[i], (i,))
        unit.expect_zero(A.wedge(e[i], e[A.algebra.unit]) - e[i], (i,))
    report.checks.append(unit.result())

    commutative = _Checker("graded-commutativity")
    for i in range(n):
        for j in range(n):
            commutative.expect_zero(A.product(i, j) - A.product(j, i).scale(sign(p[i] * p[j])), (i, j))
    report.checks.append(commutative.result())

    associative = _Checker("associativity")
    for i in range(n):
        for j in range(n):
            left_ij = A.product(i, j)
            for k in range(n):
                associative.expect_zero(A.wedge(left_ij, e[k]) - A.wedge(e[i], A.product(j, k)), (i, j, k))
    report.checks.append(associative.result())

    derivation = _Checker("delta-derivation")
    for i in range(n):
        for j in range(n):
            lhs = A.delta(A.product(i, j))
            rhs = A.wedge(A.delta.column(i), e[j]) + A.wedge(e[i], A.delta.column(j)).scale(sign(p[i]))
            derivation.expect_zero(lhs - rhs, (i, j))
    report.checks.append(derivation.result())

    for label, composite in (
        ("delta-squared", A.delta @ A.delta),
        ("bvop-squared", A.bvop @ A.bvop),
        ("delta-bvop-anticommute", A.delta @ A.bvop + A.bvop @ A.delta),
    ):
        check = _Checker(label)
        for j in range(n):
            check.expect_zero(composite.column(j), (j,))
        report.checks.append(check.result())

    symmetry = _Checker("bracket-symmetry")
    for i in range(n):
        for j in range(n):
            symmetry.expect_zero(
                A.schouten_basis(i, j) - A.schouten_basis(j, i).scale(sign(p[i] * p[j])), (i, j)
            )
    report.checks.append(symmetry.result())

    jacobi = _Checker("bracket-jacobi")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                total = (
                    A.schouten(e[i], A.schouten_basis(j, k)).scale(sign(p[i] * (p[k] - 1)))
                    + A.schouten(e[j], A.schouten_basis(k, i)).scale(sign(p[j] * (p[i] - 1)))
                    + A.schouten(e[k], A.schouten_basis(i, j)).scale(sign(p[k] * (p[j] - 1)))
                )
                jacobi.expect_zero(total, (i, j, k))
    report.checks.append(jacobi.result())

    # {λ, ·} is a derivation of degree |λ|-1, so passing μ costs (-1)^{(|λ|-1)|μ|}.
    leibniz = _Checker("bracket-leibniz")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = A.schouten(e[i], A.product(j, k))
                rhs = A.wedge(A.schouten_basis(i, j), e[k]) + A.wedge(
                    e[j], A.schouten_basis(i, k)
                ).scale(sign((p[i] - 1) * p[j]))
                leibniz.expect_zero(lhs - rhs, (i, j, k))
    report.checks.append(leibniz.result())

    LOGGER.debug("Axiom suite for %s: %d checks, %d failing", A.name, len(report.checks), len(report.failures))
    return report


@dataclass
class IntegralReport:
    is_integral: bool
    is_nice: bool
    cohomology_dim: int
    pairing_rank: int
    witness: Optional[Tuple[str, int, int]] = None
    discrepancy: Optional[Scalar] = None


def cohomology_representatives(algebra: DgbvAlgebra, operator: LinearMap | None = None) -> List[Vector]:
    """Basis vectors of ``Ker f`` completing ``Im f`` (no inner product needed)."""

    f = operator if operator is not None else algebra.delta
    kernel = Subspace.kernel(f)
    spanned = Subspace.image(f)
    representatives = []
    for vector in kernel.basis():
        if not spanned.contains(vector):
            representatives.append(vector)
            spanned = spanned + Subspace.of_vectors([vector], algebra.dim)
    return representatives


def check_integral(algebra: DgbvAlgebra) -> IntegralReport:
    """Verify both adjointness identities on basis pairs and niceness on H(A, δ)."""

    A = algebra
    p = A.parities
    witness = None
    discrepancy = None
    for label, operator, exponent in (("delta", A.delta, 1), ("bvop", A.bvop, 0)):
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = pairing(A, operator.column(i), Vector.basis(j))
                rhs = pairing(A, Vector.basis(i), operator.column(j)) * sign(p[i] + exponent)
                if lhs != rhs and witness is None:
                    witness = (label, i, j)
                    discrepancy = lhs - rhs
    representatives = cohomology_representatives(A)
    gram = [[pairing(A, a, b) for b in representatives] for a in representatives]
    pairing_rank = rank(gram) if gram else 0
    return IntegralReport(
        is_integral=witness is None,
        is_nice=pairing_rank == len(representatives),
        cohomology_dim=len(representatives),
        pairing_rank=pairing_rank,
        witness=witness,
        discrepancy=discrepancy,
    )


def maurer_cartan_residual(algebra: DgbvAlgebra, a: Vector) -> Vector:
    """``δa + ½[a•a]``."""

    return algebra.delta(a) + algebra.bracket(a, a).scale(HALF)


def shift_dgbv(algebra: DgbvAlgebra, a: Vector) -> DgbvAlgebra:
    """Replace δ by ``δ_a = δ + [a • ·]`` for an even Maurer-Cartan element with ``Δa = 0``."""

    if not a:
        return algebra
    if a.split_parity(algebra.basis)[1]:
        raise PreconditionError("Shift element must be even", residual=a)
    closed = algebra.bvop(a)
    if closed:
        raise PreconditionError("Shift element is not Δ-closed", residual=closed)
    residual = maurer_cartan_residual(algebra, a)
    if residual:
        raise PreconditionError("Shift element does not solve δa + ½[a•a] = 0", residual=residual)
    shifted = algebra.delta + algebra.adjoint_action(a)
    declared = algebra.delta.shift if not shifted.with_shift(algebra.delta.shift).check_shift(algebra.basis) else None
    LOGGER.info("Shifted %s by an element with %d terms", algebra.name, len(a))
    return algebra.with_operators(delta=shifted.with_shift(declared), name=f"{algebra.name}+shift")


def random_candidates(algebra: DgbvAlgebra, rng: random.Random, count: int, spread: int = 2) -> List[Vector]:
    """Small integer combinations of even basis elements other than the unit."""

    even = [i for i in range(algebra.dim) if not algebra.basis.parity(i) and i != algebra.algebra.unit]
    candidates = []
    for _ in range(count):
        support = rng.sample(even, k=min(len(even), rng.randint(1, 2))) if even else []
        candidates.append(Vector({i: rng.randint(-spread, spread) for i in support}))
    return candidates


def admissible_shifts(algebra: DgbvAlgebra, candidates: Iterable[Vector]) -> List[Vector]:
    """Candidates that are even, Δ-closed and solve the Maurer-Cartan equation."""

    admitted = []
    for candidate in candidates:
        if not candidate or candidate.split_parity(algebra.basis)[1]:
            continue
        if algebra.bvop(candidate) or maurer_cartan_residual(algebra, candidate):
            continue
        admitted.append(candidate)
    return admitted
