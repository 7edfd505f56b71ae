"""Nilpotent Lie algebra models: Chevalley-Eilenberg complexes and Koszul BV operators."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..dgbv import DgbvAlgebra
from ..errors import PreconditionError
from ..graded import LinearMap, Vector
from ..scalar import ZERO, Number, Scalar, sign
from .exterior import ExteriorAlgebra, bivector_terms, contraction_operator, exterior_algebra

LOGGER = logging.getLogger(__name__)

StructureConstants = Mapping[Tuple[int, int, int], Number]


@dataclass
class LieAlgebraData:
    """Structure constants ``[X_i, X_j] = Σ_k f^k_ij X_k`` with ``i < j``."""

    dim: int
    constants: Dict[Tuple[int, int, int], Scalar] = field(default_factory=dict)
    name: str = "lie"

    @classmethod
    def from_constants(cls, dim: int, constants: StructureConstants, name: str = "lie") -> "LieAlgebraData":
        cleaned: Dict[Tuple[int, int, int], Scalar] = {}
        for (i, j, k), value in constants.items():
            if not all(0 <= x < dim for x in (i, j, k)):
                raise PreconditionError(f"Structure constant ({i}, {j}, {k}) out of range for dimension {dim}")
            if i == j:
                raise PreconditionError(f"Structure constant ({i}, {j}, {k}) violates antisymmetry")
            key, factor = ((i, j, k), 1) if i < j else ((j, i, k), -1)
            cleaned[key] = cleaned.get(key, ZERO) + Scalar.coerce(value) * factor
        return cls(dim, {key: value for key, value in sorted(cleaned.items()) if value}, name)

    def bracket(self, i: int, j: int) -> Dict[int, Scalar]:
        if i == j:
            return {}
        a, b, factor = (i, j, 1) if i < j else (j, i, -1)
        return {k: value * factor for (x, y, k), value in self.constants.items() if (x, y) == (a, b)}

    def jacobi_violations(self) -> List[Tuple[int, int, int]]:
        violations = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    total: Dict[int, Scalar] = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, outer in self.bracket(b, c).items():
                            for n, value in self.bracket(a, m).items():
                                total[n] = total.get(n, ZERO) + outer * value
                    if any(total.values()):
                        violations.append((i, j, k))
        return violations

    @property
    def is_lie(self) -> bool:
        return not self.jacobi_violations()


@dataclass(frozen=True, eq=False)
class CeModel:
    """Exterior algebra on ``g*`` with the Chevalley-Eilenberg differential and top-degree integral."""

    lie: LieAlgebraData
    exterior: ExteriorAlgebra
    d: LinearMap
    integral: Vector

    @property
    def dim(self) -> int:
        return self.exterior.dim

    def dgbv(self, bvop: Optional[LinearMap] = None, name: Optional[str] = None) -> DgbvAlgebra:
        return DgbvAlgebra(
            algebra=self.exterior.algebra,
            delta=self.d,
            bvop=bvop if bvop is not None else LinearMap.zero(self.dim, -1),
            integral=self.integral,
            name=name or self.lie.name,
        )


def chevalley_eilenberg_model(lie: LieAlgebraData, generator_names: Optional[Sequence[str]] = None) -> CeModel:
    """``d e^k = -Σ_{i<j} f^k_ij e^i∧e^j`` extended as an odd derivation."""

    violations = lie.jacobi_violations()
    if violations:
        raise PreconditionError(f"Jacobi identity fails for {lie.name} at {violations[0]}")
    names = list(generator_names) if generator_names is not None else [f"e{k + 1}" for k in range(lie.dim)]
    exterior = exterior_algebra(names)
    images: Dict[int, Vector] = {}
    for (i, j, k), value in lie.constants.items():
        images[k] = images.get(k, Vector()) - exterior.monomial(i, j).scale(value)
    d = exterior.derivation(images)
    square = d @ d
    if square:
        raise PreconditionError(f"Chevalley-Eilenberg differential of {lie.name} does not square to zero", residual=square)
    return CeModel(lie, exterior, d, exterior.top_integral())


def schouten_self_bracket(lie: LieAlgebraData, w: Mapping[Tuple[int, int], Number]) -> Vector:
    """``[w, w]`` in ``Λ³g`` via ``[X1∧X2, Y1∧Y2] = Σ (-1)^{a+b} [Xa, Yb]∧X_rest∧Y_rest``."""

    polyvectors = exterior_algebra([f"X{k + 1}" for k in range(lie.dim)])
    wedge = polyvectors.algebra.wedge
    total = Vector()
    terms = bivector_terms(w)
    for i, j, w_ij in terms:
        left = (i, j)
        for k, l, w_kl in terms:
            right = (k, l)
            for a in range(2):
                for b in range(2):
                    bracket = lie.bracket(left[a], right[b])
                    if not bracket:
                        continue
                    image = Vector({polyvectors.index((m,)): value for m, value in bracket.items()})
                    rest = wedge(polyvectors.generator(left[1 - a]), polyvectors.generator(right[1 - b]))
                    total = total + wedge(image, rest).scale(w_ij * w_kl * sign(a + b))
    return total


def koszul_delta(
    exterior: ExteriorAlgebra,
    w: Mapping[Tuple[int, int], Number],
    d: LinearMap,
    lie: Optional[LieAlgebraData] = None,
) -> LinearMap:
    """``Δ = ι_w d - d ι_w`` for a Poisson bivector ``w``."""

    if lie is not None:
        self_bracket = schouten_self_bracket(lie, w)
        if self_bracket:
            raise PreconditionError("Bivector is not Poisson: [w, w] ≠ 0", residual=self_bracket)
    contraction = contraction_operator(exterior, w)
    bvop = (contraction @ d - d @ contraction).with_shift(-1)
    for label, residual in (("Δ²", bvop @ bvop), ("dΔ + Δd", d @ bvop + bvop @ d)):
        if residual:
            raise PreconditionError(f"Koszul operator violates {label} = 0", residual=residual)
    LOGGER.debug("Koszul operator with %d nonzero entries", sum(1 for _ in bvop.entries()))
    return bvop


@dataclass
class PairingReport:
    ok: bool
    checked: int
    witness: Optional[Tuple[int, int]] = None
    lhs: Optional[Scalar] = None
    rhs: Optional[Scalar] = None


def _integrate(integral: Vector, v: Vector) -> Scalar:
    total = ZERO
    for position, value in v.items():
        total = total + value * integral[position]
    return total


def check_contraction_identity(
    exterior: ExteriorAlgebra, integral: Vector, w: Mapping[Tuple[int, int], Number]
) -> PairingReport:
    """``∫(w⊢α)∧β = ∫α∧(w⊢β)`` for basis pairs with ``|α| + |β| = top + 2``."""

    contraction = contraction_operator(exterior, w)
    wedge = exterior.algebra.wedge
    top = exterior.rank
    report = PairingReport(ok=True, checked=0)
    for a, alpha in enumerate(exterior.subsets):
        for b, beta in enumerate(exterior.subsets):
            if len(alpha) + len(beta) != top + 2:
                continue
            report.checked += 1
            lhs = _integrate(integral, wedge(contraction.column(a), Vector.basis(b)))
            rhs = _integrate(integral, wedge(Vector.basis(a), contraction.column(b)))
            if lhs != rhs and report.ok:
                report.ok, report.witness, report.lhs, report.rhs = False, (a, b), lhs, rhs
    return report


def check_delta_integral(exterior: ExteriorAlgebra, integral: Vector, bvop: LinearMap) -> PairingReport:
    """``∫(Δα)∧β = (-1)^{|α|} ∫α∧Δβ`` over all basis pairs."""

    wedge = exterior.algebra.wedge
    report = PairingReport(ok=True, checked=0)
    for a, alpha in enumerate(exterior.subsets):
        for b in range(exterior.dim):
            report.checked += 1
            lhs = _integrate(integral, wedge(bvop.column(a), Vector.basis(b)))
            rhs = _integrate(integral, wedge(Vector.basis(a), bvop.column(b))) * sign(len(alpha))
            if lhs != rhs and report.ok:
                report.ok, report.witness, report.lhs, report.rhs = False, (a, b), lhs, rhs
    return report
