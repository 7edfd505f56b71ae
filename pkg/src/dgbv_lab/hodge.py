"""Finite Hodge theory over exact scalars.

Inner products are Hermitian Gram matrices on the graded basis, conjugate
linear in the first slot. Everything derived from an operator and an inner
product (adjoint, Laplacian, harmonic projection, Green operator) is bundled
in :class:`HodgeTheory` and cached per pair.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Dict, List, Mapping, Optional, Sequence, Tuple

from .dgbv import DgbvAlgebra, cohomology_representatives
from .errors import KahlerIdentityError, LinearAlgebraError, PreconditionError
from .graded import GradedBasis, LinearMap, Shift, Vector, negate_shift, supercommutator
from .linalg import Matrix, Subspace, determinant, inverse, matmul, nullspace, rank, solve, transpose
from .scalar import HALF, I, ONE, ZERO, Number, Scalar

if TYPE_CHECKING:
    from .models.kahler import BigradedModel

LOGGER = logging.getLogger(__name__)


def _conjugate_transpose(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return [[value.conjugate() for value in row] for row in transpose(rows)]


class InnerProduct:
    """Hermitian, positive-definite and block-diagonal with respect to the grading."""

    def __init__(self, basis: GradedBasis, gram: Sequence[Sequence[Number]]) -> None:
        self.basis = basis
        self.gram: Matrix = [[Scalar.coerce(value) for value in row] for row in gram]
        self._validate()
        self.gram_inverse = inverse(self.gram)

    @classmethod
    def standard(cls, basis: GradedBasis) -> "InnerProduct":
        return cls.diagonal(basis, [ONE] * basis.dim)

    @classmethod
    def diagonal(cls, basis: GradedBasis, weights: Sequence[Number]) -> "InnerProduct":
        n = basis.dim
        return cls(basis, [[weights[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_blocks(cls, basis: GradedBasis, blocks: Mapping[Shift, Sequence[Sequence[Number]]]) -> "InnerProduct":
        """Blocks keyed by grading; missing gradings default to the identity block."""

        n = basis.dim
        gram: List[List[Scalar]] = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for grading, indices in basis.blocks().items():
            block = blocks.get(grading)
            if block is None:
                continue
            if len(block) != len(indices) or any(len(row) != len(indices) for row in block):
                raise LinearAlgebraError(f"Inner-product block for grading {grading} must be {len(indices)}x{len(indices)}")
            for a, i in enumerate(indices):
                for b, j in enumerate(indices):
                    gram[i][j] = Scalar.coerce(block[a][b])
        return cls(basis, gram)

    def _validate(self) -> None:
        n = self.basis.dim
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise LinearAlgebraError(f"Gram matrix must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i].conjugate():
                    raise LinearAlgebraError(f"Inner product is not Hermitian at ({i}, {j})")
                if self.gram[i][j] and self.basis[i].grading != self.basis[j].grading:
                    raise LinearAlgebraError(
                        f"Inner product pairs '{self.basis[i].name}' and '{self.basis[j].name}' of different gradings"
                    )
        for grading, indices in self.basis.blocks().items():
            for size in range(1, len(indices) + 1):
                minor = determinant([[self.gram[i][j] for j in indices[:size]] for i in indices[:size]])
                if not minor.is_real or minor.re <= 0:
                    raise LinearAlgebraError(f"Inner product is not positive definite on grading {grading}")

    def __call__(self, a: Vector, b: Vector) -> Scalar:
        total = ZERO
        for i, ai in a.items():
            row = self.gram[i]
            for j, bj in b.items():
                if row[j]:
                    total = total + ai.conjugate() * row[j] * bj
        return total

    def adjoint(self, f: LinearMap) -> LinearMap:
        """``f* = P⁻¹ f† P`` so that ``⟨f a, b⟩ = ⟨a, f* b⟩``."""

        dense = matmul(matmul(self.gram_inverse, _conjugate_transpose(f.to_dense())), self.gram)
        return LinearMap.from_dense(dense, negate_shift(f.shift))


class HodgeTheory:
    """Adjoint, Laplacian, harmonic projection and Green operator of one operator."""

    def __init__(self, operator: LinearMap, ip: InnerProduct) -> None:
        self.operator = operator
        self.ip = ip

    @cached_property
    def adjoint(self) -> LinearMap:
        return self.ip.adjoint(self.operator)

    @cached_property
    def laplacian(self) -> LinearMap:
        f, f_star = self.operator, self.adjoint
        return (f @ f_star + f_star @ f).with_shift(0)

    @cached_property
    def harmonic_basis(self) -> List[Vector]:
        """Canonical kernel basis of the Laplacian, block by block in grading order."""

        dense = self.laplacian.to_dense()
        vectors = []
        for indices in self.ip.basis.blocks().values():
            block = [[dense[i][j] for j in indices] for i in indices]
            for solution in nullspace(block, len(indices)):
                vectors.append(Vector({indices[k]: value for k, value in enumerate(solution)}))
        return vectors

    @cached_property
    def projection(self) -> LinearMap:
        """Orthogonal projection ``K (K† P K)⁻¹ K† P`` onto the harmonic space."""

        n = self.operator.dim
        kernel = self.harmonic_basis
        if not kernel:
            return LinearMap.zero(n)
        k = transpose([v.to_dense(n) for v in kernel])
        k_dagger_p = matmul(_conjugate_transpose(k), self.ip.gram)
        middle = inverse(matmul(k_dagger_p, k))
        return LinearMap.from_dense(matmul(matmul(k, middle), k_dagger_p), 0)

    @cached_property
    def green(self) -> LinearMap:
        n = self.operator.dim
        box = self.laplacian.to_dense()
        columns: Dict[int, Vector] = {}
        for j in range(n):
            target = Vector.basis(j) - self.projection(Vector.basis(j))
            if not target:
                continue
            solution = solve(box, target.to_dense(n), n)
            if solution is None:
                raise LinearAlgebraError("Laplacian equation has no solution off the harmonic space")
            u = Vector.from_dense(solution)
            columns[j] = u - self.projection(u)
        return LinearMap(n, columns, 0)

    def harmonic(self, v: Vector) -> Vector:
        return self.projection(v)

    def is_harmonic(self, v: Vector) -> bool:
        return not self.laplacian(v)


def hodge_theory(operator: LinearMap, ip: InnerProduct) -> HodgeTheory:
    # LinearMap equality ignores the shift, which the adjoint carries.
    return _hodge_theory(operator, operator.shift, ip)


@lru_cache(maxsize=128)
def _hodge_theory(operator: LinearMap, shift: Shift | None, ip: InnerProduct) -> HodgeTheory:
    return HodgeTheory(operator, ip)


def adjoint(f: LinearMap, ip: InnerProduct) -> LinearMap:
    return hodge_theory(f, ip).adjoint


def laplacian(f: LinearMap, ip: InnerProduct) -> LinearMap:
    """``f f* + f* f``."""

    return hodge_theory(f, ip).laplacian


def harmonic_projection(f: LinearMap, ip: InnerProduct) -> LinearMap:
    return hodge_theory(f, ip).projection


def green_operator(f: LinearMap, ip: InnerProduct) -> LinearMap:
    return hodge_theory(f, ip).green


def green(v: Vector, f: LinearMap, ip: InnerProduct) -> Vector:
    return hodge_theory(f, ip).green(v)


@dataclass(frozen=True)
class HodgeDecomposition:
    harmonic: Vector
    exact: Vector
    coexact: Vector

    def recompose(self) -> Vector:
        return self.harmonic + self.exact + self.coexact


def hodge_decompose(v: Vector, f: LinearMap, ip: InnerProduct) -> HodgeDecomposition:
    """``v = h + f(f* G v) + f*(f G v)`` with the three parts mutually orthogonal."""

    square = f @ f
    if square:
        raise PreconditionError("Operator does not square to zero", residual=square)
    theory = hodge_theory(f, ip)
    u = theory.green(v)
    return HodgeDecomposition(
        harmonic=theory.projection(v),
        exact=f(theory.adjoint(u)),
        coexact=theory.adjoint(f(u)),
    )


@dataclass
class ConditionReport:
    condition_a: bool
    condition_b: bool
    condition_c: bool
    dims: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.condition_a and self.condition_b and self.condition_c

    @property
    def consistent(self) -> bool:
        return (self.condition_a and self.condition_b) == self.condition_c

    @property
    def cohomology_dims_agree(self) -> bool:
        return self.dims["H(delta)"] == self.dims["H(bvop)"] == self.dims["ker/im(delta bvop)"]


def check_lemma_conditions(algebra: DgbvAlgebra) -> ConditionReport:
    """Decide the three image/kernel equalities exactly."""

    delta, bvop = algebra.delta, algebra.bvop
    im_delta_bvop = Subspace.image(delta @ bvop)
    im_bvop_delta = Subspace.image(bvop @ delta)
    im_delta, im_bvop = Subspace.image(delta), Subspace.image(bvop)
    ker_delta, ker_bvop = Subspace.kernel(delta), Subspace.kernel(bvop)
    im_delta_in_ker = im_delta.intersection(ker_bvop)
    im_bvop_in_ker = im_bvop.intersection(ker_delta)
    both_closed = ker_delta.intersection(ker_bvop)
    closed_and_exact = both_closed.intersection(im_delta + im_bvop)
    images_agree = im_delta_bvop == im_bvop_delta
    report = ConditionReport(
        condition_a=images_agree and im_delta_bvop == im_delta_in_ker,
        condition_b=images_agree and im_delta_bvop == im_bvop_in_ker,
        condition_c=images_agree and im_delta_bvop == closed_and_exact,
        dims={
            "im(delta bvop)": im_delta_bvop.dim,
            "im(bvop delta)": im_bvop_delta.dim,
            "im(delta) & ker(bvop)": im_delta_in_ker.dim,
            "im(bvop) & ker(delta)": im_bvop_in_ker.dim,
            "ker & (im + im)": closed_and_exact.dim,
            "H(delta)": ker_delta.dim - im_delta.dim,
            "H(bvop)": ker_bvop.dim - im_bvop.dim,
            "ker/im(delta bvop)": both_closed.dim - im_delta_bvop.dim,
        },
    )
    if not report.consistent:
        LOGGER.error("Condition report for %s is internally inconsistent: %s", algebra.name, report)
    return report


@dataclass
class InclusionReport:
    """Whether ``(Ker Δ, δ) → (A, δ)`` and ``(Ker δ, Δ) → (A, Δ)`` are injective/surjective on cohomology."""

    i_injective: bool
    i_surjective: bool
    j_injective: bool
    j_surjective: bool

    @property
    def ok(self) -> bool:
        return self.i_injective and self.i_surjective and self.j_injective and self.j_surjective


def _inclusion(f: LinearMap, g: LinearMap) -> Tuple[bool, bool]:
    # Cohomology of f restricted to Ker g, mapped into H(A, f).
    ker_f, ker_g = Subspace.kernel(f), Subspace.kernel(g)
    im_f = Subspace.image(f)
    f_of_ker_g = Subspace.of_vectors([f(v) for v in ker_g.basis()], f.dim)
    injective = f_of_ker_g == im_f.intersection(ker_g)
    surjective = ker_f.intersection(ker_g) + im_f == ker_f
    return injective, surjective


def inclusion_report(algebra: DgbvAlgebra) -> InclusionReport:
    i_inj, i_surj = _inclusion(algebra.delta, algebra.bvop)
    j_inj, j_surj = _inclusion(algebra.bvop, algebra.delta)
    return InclusionReport(i_inj, i_surj, j_inj, j_surj)


def cohomology_basis(algebra: DgbvAlgebra, ip: InnerProduct) -> List[Vector]:
    """Harmonic representatives of ``H(A, δ)`` with the unit first."""

    theory = hodge_theory(algebra.delta, ip)
    unit = Vector.basis(algebra.algebra.unit)
    if not theory.is_harmonic(unit):
        raise PreconditionError("Unit is not harmonic for the chosen inner product", residual=theory.laplacian(unit))
    chosen = [unit]
    spanned = Subspace.of_vectors(chosen, algebra.dim)
    for vector in theory.harmonic_basis:
        if not spanned.contains(vector):
            chosen.append(vector)
            spanned = spanned + Subspace.of_vectors([vector], algebra.dim)
    LOGGER.debug("Harmonic basis of %s has %d classes", algebra.name, len(chosen))
    return chosen


def real_basis(vectors: Sequence[Vector], real_structure: LinearMap, dim: int) -> List[Vector]:
    """Canonical conjugation-fixed basis of a conjugation-stable span.

    Conjugation is ``v ↦ real_structure(v̄)``. Candidates are ``(v + v̄)/2``
    then ``i(v - v̄)/2`` for each input in order; independent ones are kept.
    """

    span = Subspace.of_vectors(list(vectors), dim)
    chosen: List[Vector] = []
    spanned = Subspace.of_vectors([], dim)
    for v in vectors:
        mirrored = real_structure(v.conjugate())
        if not span.contains(mirrored):
            raise PreconditionError("Span is not stable under conjugation", residual=mirrored)
        for candidate in ((v + mirrored).scale(HALF), (v - mirrored).scale(I * HALF)):
            if candidate and not spanned.contains(candidate):
                chosen.append(candidate)
                spanned = spanned + Subspace.of_vectors([candidate], dim)
    return chosen


def is_real(vector: Vector, real_structure: LinearMap) -> bool:
    return real_structure(vector.conjugate()) == vector


@dataclass
class LefschetzRow:
    k: int
    source_dim: int
    target_dim: int
    rank: int

    @property
    def ok(self) -> bool:
        return self.source_dim == self.target_dim == self.rank


@dataclass
class LefschetzReport:
    """Per-k rank table. An odd top degree leaves nothing to check and is reported as not applicable."""

    half_dimension: int
    rows: List[LefschetzRow] = field(default_factory=list)
    applicable: bool = True
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)


def _degree_indices(basis: GradedBasis, degree: int) -> List[int]:
    return [i for i, element in enumerate(basis) if element.degree == degree]


def hard_lefschetz_check(
    algebra: DgbvAlgebra, omega: Vector, differential: Optional[LinearMap] = None
) -> LefschetzReport:
    """Ranks of ``L^k: H^{n-k} → H^{n+k}`` on ``H(A, d)`` with ``L = ω∧``."""

    d = differential if differential is not None else algebra.delta
    basis = algebra.basis
    if not omega or any(basis[i].degree != 2 for i in omega.support()):
        raise PreconditionError("Lefschetz class must be a nonzero element of degree 2", residual=omega)
    if d(omega):
        raise PreconditionError("Lefschetz class is not closed", residual=d(omega))
    top = basis.top_degree()
    if top % 2:
        LOGGER.info("Hard Lefschetz on %s: not applicable, top degree %d is odd", algebra.name, top)
        return LefschetzReport(half_dimension=top // 2, applicable=False, reason=f"top degree {top} is odd")
    n = top // 2
    representatives = cohomology_representatives(algebra, d)
    image = Subspace.image(d)
    report = LefschetzReport(half_dimension=n)
    for k in range(n + 1):
        source = [v for v in representatives if v and basis[v.support()[0]].degree == n - k]
        target = [v for v in representatives if v and basis[v.support()[0]].degree == n + k]
        power = algebra.algebra.power(omega, k)
        images = [algebra.wedge(power, v) for v in source]
        exact_target = image.intersection(Subspace.of_vectors([Vector.basis(i) for i in _degree_indices(basis, n + k)], algebra.dim))
        with_images = exact_target + Subspace.of_vectors(images, algebra.dim)
        report.rows.append(LefschetzRow(k, len(source), len(target), with_images.dim - exact_target.dim))
    LOGGER.info("Hard Lefschetz on %s: %s", algebra.name, "pass" if report.ok else "fail")
    return report


@dataclass
class IdentityCheck:
    name: str
    ok: bool
    discrepancy: Optional[LinearMap] = None


@dataclass
class KahlerReport:
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    @property
    def failures(self) -> List[IdentityCheck]:
        return [check for check in self.checks if not check.ok]


def check_kahler_identities(model: "BigradedModel") -> KahlerReport:
    """Verify the Kähler identities of a bigraded model as exact matrix equations."""

    ip = model.inner_product
    partial, dbar = model.partial, model.dbar
    d = model.d
    partial_star, dbar_star, d_star = ip.adjoint(partial), ip.adjoint(dbar), ip.adjoint(d)
    bvop = (dbar_star - partial_star).scale(I)
    bvop_star = ip.adjoint(bvop)
    box = d @ d_star + d_star @ d
    box_bvop = bvop @ bvop_star + bvop_star @ bvop
    box_partial = partial @ partial_star + partial_star @ partial
    box_dbar = dbar @ dbar_star + dbar_star @ dbar
    lefschetz = model.algebra.left_multiplication(model.omega)
    dual = ip.adjoint(lefschetz)
    n = model.complex_dimension
    weight = LinearMap(
        model.algebra.dim,
        {j: Vector.basis(j, element.degree - n) for j, element in enumerate(model.algebra.basis)},
        0,
    )
    equations = [
        ("laplacian-bvop", box_bvop - box),
        ("laplacian-partial", box - box_partial.scale(2)),
        ("laplacian-dbar", box - box_dbar.scale(2)),
        ("d-bvop-adjoint", d @ bvop_star + bvop_star @ d),
        ("bvop-d-adjoint", bvop @ d_star + d_star @ bvop),
        ("dbar-partial-adjoint", dbar @ partial_star + partial_star @ dbar),
        ("partial-dbar-adjoint", partial @ dbar_star + dbar_star @ partial),
        ("lambda-d-commutator", supercommutator(dual, d) - bvop),
        ("lefschetz-sl2", supercommutator(lefschetz, dual) - weight),
    ]
    report = KahlerReport([IdentityCheck(name, not residual, residual or None) for name, residual in equations])
    for failure in report.failures:
        LOGGER.info("Kähler identity %s fails on %s", failure.name, model.name)
    return report


def require_kahler(model: "BigradedModel") -> KahlerReport:
    report = check_kahler_identities(model)
    if not report.ok:
        names = ", ".join(check.name for check in report.failures)
        raise KahlerIdentityError(f"Model '{model.name}' fails Kähler identities: {names}", residual=report)
    return report
