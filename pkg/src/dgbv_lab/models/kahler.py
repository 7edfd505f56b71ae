"""Bigraded Kähler-type models and their Dolbeault, mirror and de Rham dGBV structures."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import factorial
from typing import List, Optional, Sequence

from ..dgbv import DgbvAlgebra, GradedAlgebra
from ..errors import KahlerIdentityError
from ..graded import LinearMap, Vector
from ..hodge import InnerProduct, require_kahler
from ..scalar import HALF, I, ONE, Number, Scalar
from .exterior import exterior_algebra

LOGGER = logging.getLogger(__name__)


def conjugate_entries(f: LinearMap) -> LinearMap:
    return LinearMap.from_entries(f.dim, [(i, j, value.conjugate()) for i, j, value in f.entries()], f.shift)


@dataclass(frozen=True, eq=False)
class BigradedModel:
    """``(Ω^{*,*}, ∂, ∂̄, ⟨,⟩, ω)`` with a real structure.

    ``real_structure`` is the complex-linear part of conjugation:
    ``v̄ = real_structure(conj(coefficients of v))``.
    """

    name: str
    algebra: GradedAlgebra
    partial: LinearMap
    dbar: LinearMap
    inner_product: InnerProduct
    omega: Vector
    real_structure: LinearMap
    integral: Vector

    @property
    def d(self) -> LinearMap:
        return (self.partial + self.dbar).with_shift(1)

    @property
    def complex_dimension(self) -> int:
        return self.algebra.basis.top_degree() // 2

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def conjugate(self, v: Vector) -> Vector:
        return self.real_structure(v.conjugate())

    def violations(self) -> List[str]:
        """Structural identities that fail: squares, anticommutator and conjugation symmetry."""

        problems = []
        if not self.algebra.basis.bigraded:
            problems.append("basis is not bigraded")
        for label, residual in (
            ("∂²", self.partial @ self.partial),
            ("∂̄²", self.dbar @ self.dbar),
            ("∂∂̄ + ∂̄∂", self.partial @ self.dbar + self.dbar @ self.partial),
            ("conjugation ∘ ∂ - ∂̄ ∘ conjugation", self.real_structure @ conjugate_entries(self.partial) - self.dbar @ self.real_structure),
        ):
            if residual:
                problems.append(label)
        if self.conjugate(self.omega) != self.omega:
            problems.append("ω is not real")
        for label, f in (("∂", self.partial), ("∂̄", self.dbar)):
            if f.check_shift(self.algebra.basis):
                problems.append(f"{label} does not have its declared bidegree")
        return problems


def bigraded_kahler_model(n: int, weights: Optional[Sequence[Number]] = None, name: Optional[str] = None) -> BigradedModel:
    """Constant-coefficient forms on a complex torus of dimension ``n``.

    Generators are ``dz1..dzn`` then ``dzb1..dzbn``. The default inner
    product weights a monomial by ``2^degree`` (``|dz|² = 2``).
    """

    if n < 1:
        raise ValueError("Complex dimension must be at least 1")
    names = [f"dz{k + 1}" for k in range(n)] + [f"dzb{k + 1}" for k in range(n)]
    bidegrees = [(1, 0)] * n + [(0, 1)] * n
    exterior = exterior_algebra(names, bidegrees)
    dim = exterior.dim
    basis = exterior.basis
    if weights is None:
        weights = [2 ** len(subset) for subset in exterior.subsets]
    if len(weights) != dim:
        raise ValueError(f"Expected {dim} inner-product weights, got {len(weights)}")
    swap = [g + n if g < n else g - n for g in range(2 * n)]
    real_structure = LinearMap(
        dim,
        {k: exterior.monomial(*[swap[g] for g in subset]) for k, subset in enumerate(exterior.subsets)},
        None,
    )
    omega = Vector()
    for k in range(n):
        omega = omega + exterior.monomial(k, k + n).scale(I * HALF)
    volume = exterior.algebra.power(omega, n).scale(Scalar(1) / factorial(n))
    integral = exterior.top_integral(ONE / volume[exterior.top])
    return BigradedModel(
        name=name or f"complex-torus-{n}",
        algebra=exterior.algebra,
        partial=LinearMap.zero(dim, (1, 0)),
        dbar=LinearMap.zero(dim, (0, 1)),
        inner_product=InnerProduct.diagonal(basis, weights),
        omega=omega,
        real_structure=real_structure,
        integral=integral,
    )


def _require(model: BigradedModel) -> None:
    problems = model.violations()
    if problems:
        raise KahlerIdentityError(f"Model '{model.name}' is not a bigraded model: {', '.join(problems)}")
    require_kahler(model)


def dolbeault_dgbv(model: BigradedModel) -> DgbvAlgebra:
    """``(∧, ∂̄, -√-1 ∂*)``."""

    _require(model)
    bvop = model.inner_product.adjoint(model.partial).scale(-I)
    return DgbvAlgebra(model.algebra, model.dbar, bvop, model.integral, name=f"{model.name}/dolbeault")


def mirror_dgbv(model: BigradedModel) -> DgbvAlgebra:
    """``(∧, ∂, √-1 ∂̄*)``."""

    _require(model)
    bvop = model.inner_product.adjoint(model.dbar).scale(I)
    return DgbvAlgebra(model.algebra, model.partial, bvop, model.integral, name=f"{model.name}/mirror")


def derham_dgbv(model: BigradedModel) -> DgbvAlgebra:
    """``(∧, d, √-1(∂̄* - ∂*))``, cross-checked against ``[Λ, d]``."""

    _require(model)
    ip = model.inner_product
    bvop = (ip.adjoint(model.dbar) - ip.adjoint(model.partial)).scale(I).with_shift(-1)
    dual = ip.adjoint(model.algebra.left_multiplication(model.omega))
    d = model.d
    commutator = dual @ d - d @ dual
    if commutator != bvop:
        raise KahlerIdentityError(f"[Λ, d] differs from √-1(∂̄* - ∂*) on '{model.name}'", residual=commutator - bvop)
    return DgbvAlgebra(model.algebra, d, bvop, model.integral, name=f"{model.name}/derham")
