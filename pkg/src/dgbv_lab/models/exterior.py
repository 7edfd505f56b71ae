"""Exterior algebras on odd generators, their derivations and interior products."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..dgbv import GradedAlgebra
from ..errors import GradingError
from ..graded import BasisElement, Bidegree, GradedBasis, LinearMap, Shift, Vector, koszul_sign
from ..scalar import Number, Scalar

Subset = Tuple[int, ...]
UNIT_NAME = "1"


@dataclass(frozen=True, eq=False)
class ExteriorAlgebra:
    """``Λ(g_1, ..., g_n)`` with monomials ordered by size, then lexicographically.

    Index 0 is the unit. Generators carry degree 1, or a bidegree of total
    degree 1 when the algebra is bigraded.
    """

    generators: Tuple[str, ...]
    bidegrees: Optional[Tuple[Bidegree, ...]] = None
    subsets: Tuple[Subset, ...] = field(init=False)
    algebra: GradedAlgebra = field(init=False)
    _position: Dict[Subset, int] = field(init=False, default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise GradingError("Generator names must be unique")
        if self.bidegrees is not None:
            if len(self.bidegrees) != n or any(sum(b) != 1 for b in self.bidegrees):
                raise GradingError("Each generator needs a bidegree of total degree 1")
        subsets = tuple(s for size in range(n + 1) for s in combinations(range(n), size))
        position = {s: k for k, s in enumerate(subsets)}
        object.__setattr__(self, "subsets", subsets)
        object.__setattr__(self, "_position", position)
        elements = []
        for s in subsets:
            bidegree = None
            if self.bidegrees is not None:
                bidegree = (sum(self.bidegrees[g][0] for g in s), sum(self.bidegrees[g][1] for g in s))
            elements.append(BasisElement(self.subset_name(s), len(s), bidegree))
        table: Dict[Tuple[int, int], Vector] = {}
        odd = [1] * n
        for i, left in enumerate(subsets):
            for j, right in enumerate(subsets):
                if set(left) & set(right):
                    continue
                written = left + right
                order = sorted(range(len(written)), key=lambda k: written[k])
                sign = koszul_sign([odd[g] for g in written], order)
                table[(i, j)] = Vector.basis(position[tuple(sorted(written))], sign)
        object.__setattr__(self, "algebra", GradedAlgebra(GradedBasis(tuple(elements)), table, 0))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return len(self.subsets)

    @property
    def basis(self) -> GradedBasis:
        return self.algebra.basis

    @property
    def top(self) -> int:
        return self.dim - 1

    def subset_name(self, subset: Subset) -> str:
        return "^".join(self.generators[g] for g in subset) if subset else UNIT_NAME

    def index(self, subset: Sequence[int]) -> int:
        return self._position[tuple(subset)]

    def monomial(self, *generators: int) -> Vector:
        """Wedge of generators in the order written."""

        result = Vector.basis(0)
        for g in generators:
            result = self.algebra.wedge(result, self.generator(g))
        return result

    def generator(self, g: int) -> Vector:
        return Vector.basis(self._position[(g,)])

    def element(self, terms: Mapping[Sequence[int], Number]) -> Vector:
        total = Vector()
        for subset, coefficient in terms.items():
            total = total + self.monomial(*subset).scale(coefficient)
        return total

    def derivation(self, images: Mapping[int, Vector], shift: Shift = 1) -> LinearMap:
        """Odd derivation determined by the images of the generators."""

        columns: Dict[int, Vector] = {}
        wedge = self.algebra.wedge
        for k, subset in enumerate(self.subsets):
            total = Vector()
            for s, g in enumerate(subset):
                image = images.get(g)
                if not image:
                    continue
                left = self.monomial(*subset[:s])
                right = self.monomial(*subset[s + 1 :])
                total = total + wedge(wedge(left, image), right).scale(-1 if s % 2 else 1)
            columns[k] = total
        return LinearMap(self.dim, columns, shift)

    def interior(self, g: int) -> LinearMap:
        """Left interior product with the dual vector of generator ``g``."""

        columns = {}
        for k, subset in enumerate(self.subsets):
            if g in subset:
                s = subset.index(g)
                rest = subset[:s] + subset[s + 1 :]
                columns[k] = Vector.basis(self._position[rest], -1 if s % 2 else 1)
        shift: Shift
        if self.bidegrees is not None:
            shift = (-self.bidegrees[g][0], -self.bidegrees[g][1])
        else:
            shift = -1
        return LinearMap(self.dim, columns, shift)

    def top_integral(self, value: Number = 1) -> Vector:
        return Vector.basis(self.top, Scalar.coerce(value))


def exterior_algebra(generators: Sequence[str], bidegrees: Optional[Sequence[Bidegree]] = None) -> ExteriorAlgebra:
    return ExteriorAlgebra(tuple(generators), tuple(tuple(b) for b in bidegrees) if bidegrees is not None else None)


def bivector_terms(w: Mapping[Tuple[int, int], Number]) -> List[Tuple[int, int, Scalar]]:
    """Normalize ``w^{ij}`` to ``i < j`` using antisymmetry."""

    merged: Dict[Tuple[int, int], Scalar] = {}
    for (i, j), value in w.items():
        if i == j:
            raise GradingError(f"Bivector entry ({i}, {j}) is on the diagonal")
        key, factor = ((i, j), 1) if i < j else ((j, i), -1)
        merged[key] = merged.get(key, Scalar(0)) + Scalar.coerce(value) * factor
    return [(i, j, value) for (i, j), value in sorted(merged.items()) if value]


def contraction_operator(exterior: ExteriorAlgebra, w: Mapping[Tuple[int, int], Number]) -> LinearMap:
    """``ι_w = Σ_{i<j} w^{ij} ι_i ι_j``, lowering degree by 2."""

    total = LinearMap.zero(exterior.dim, -2)
    for i, j, value in bivector_terms(w):
        total = total + (exterior.interior(i) @ exterior.interior(j)).scale(value).with_shift(-2)
    return total.with_shift(-2)
