"""Bundled models, addressable by name from the command line."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from ..dgbv import DgbvAlgebra
from ..graded import LinearMap, Vector
from ..hodge import InnerProduct
from ..scalar import Number
from .exterior import ExteriorAlgebra, exterior_algebra
from .kahler import BigradedModel, bigraded_kahler_model, dolbeault_dgbv
from .lie import LieAlgebraData, chevalley_eilenberg_model, koszul_delta


@dataclass(frozen=True, eq=False)
class BundledModel:
    name: str
    description: str
    dgbv: DgbvAlgebra
    inner_product: InnerProduct
    omega: Optional[Vector] = None
    bigraded: Optional[BigradedModel] = None
    lie: Optional[LieAlgebraData] = None
    exterior: Optional[ExteriorAlgebra] = None
    bivector: Mapping[Tuple[int, int], Number] = field(default_factory=dict)


def _lie_model(
    name: str,
    description: str,
    lie: LieAlgebraData,
    bivector: Mapping[Tuple[int, int], Number],
    omega_terms: Optional[Mapping[Tuple[int, ...], Number]] = None,
) -> BundledModel:
    ce = chevalley_eilenberg_model(lie)
    bvop = koszul_delta(ce.exterior, bivector, ce.d, lie)
    return BundledModel(
        name=name,
        description=description,
        dgbv=ce.dgbv(bvop, name=name),
        inner_product=InnerProduct.standard(ce.exterior.basis),
        omega=ce.exterior.element(omega_terms) if omega_terms else None,
        lie=lie,
        exterior=ce.exterior,
        bivector=dict(bivector),
    )


def torus_4() -> BundledModel:
    lie = LieAlgebraData.from_constants(4, {}, name="torus-4")
    return _lie_model(
        "torus-4",
        "Real 4-torus: abelian Chevalley-Eilenberg model, d = Δ = 0",
        lie,
        {(0, 1): 1, (2, 3): 1},
        {(0, 1): 1, (2, 3): 1},
    )


def heisenberg() -> BundledModel:
    lie = LieAlgebraData.from_constants(3, {(0, 1, 2): 1}, name="heisenberg")
    return _lie_model(
        "heisenberg",
        "Heisenberg nilmanifold: de3 = -e1^e2, Koszul Δ of w = X1^X3",
        lie,
        {(0, 2): 1},
    )


def kodaira_thurston() -> BundledModel:
    lie = LieAlgebraData.from_constants(4, {(0, 1, 2): 1}, name="kodaira-thurston")
    return _lie_model(
        "kodaira-thurston",
        "Kodaira-Thurston nilmanifold: symplectic ω = e1^e3 + e2^e4, not Kähler",
        lie,
        {(0, 2): 1, (1, 3): 1},
        {(0, 2): 1, (1, 3): 1},
    )


def complex_torus(n: int) -> Callable[[], BundledModel]:
    def build() -> BundledModel:
        model = bigraded_kahler_model(n)
        return BundledModel(
            name=model.name,
            description=f"Complex torus of dimension {n}: Dolbeault structure (∂̄, -√-1 ∂*)",
            dgbv=dolbeault_dgbv(model),
            inner_product=model.inner_product,
            omega=model.omega,
            bigraded=model,
        )

    return build


def bv_composite(compatible_integral: bool = True) -> BundledModel:
    """``Λ(θ1, θ2, η)`` with ``Δ(θ1∧θ2) = η`` and ``δ = 0``.

    The bracket ``[θ1•θ2] = -η`` makes the order-2 equation unsolvable.
    With ``compatible_integral=False`` the integral is ``∫η = 1``, which
    breaks the Δ-adjointness identity.
    """

    exterior = exterior_algebra(["t1", "t2", "eta"])
    bvop = LinearMap(exterior.dim, {exterior.index((0, 1)): exterior.generator(2)}, -1)
    integral = exterior.top_integral() if compatible_integral else exterior.generator(2)
    name = "bv-composite" if compatible_integral else "bv-composite-skew"
    algebra = DgbvAlgebra(exterior.algebra, LinearMap.zero(exterior.dim, 1), bvop, integral, name=name)
    return BundledModel(
        name=name,
        description="Λ(θ1, θ2, η) with Δ(θ1^θ2) = η and δ = 0; obstructed at order 2",
        dgbv=algebra,
        inner_product=InnerProduct.standard(exterior.basis),
        exterior=exterior,
    )


BUILDERS: Dict[str, Callable[[], BundledModel]] = {
    "torus-4": torus_4,
    "heisenberg": heisenberg,
    "kodaira-thurston": kodaira_thurston,
    "complex-torus-1": complex_torus(1),
    "complex-torus-2": complex_torus(2),
    "bv-composite": bv_composite,
}


def list_models() -> List[str]:
    return list(BUILDERS)


def load_bundled(name: str) -> BundledModel:
    try:
        builder = BUILDERS[name]
    except KeyError as exc:
        raise KeyError(f"Unknown bundled model '{name}'; available: {', '.join(BUILDERS)}") from exc
    return builder()
