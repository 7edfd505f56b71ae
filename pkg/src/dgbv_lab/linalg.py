"""Exact linear algebra over Gaussian rationals.

Elimination, inversion and determinants run on sympy's ``DomainMatrix`` over
``QQ_I``. Matrices enter and leave this module as dense lists of rows of
:class:`Scalar`; subspaces keep their reduced row echelon form, which is
unique and so doubles as an equality key.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError, DMNonSquareMatrixError

from .errors import LinearAlgebraError
from .graded import LinearMap, Vector
from .scalar import ONE, ZERO, Scalar

Matrix = List[List[Scalar]]


def to_domain(value: Scalar):
    value = Scalar.coerce(value)
    return QQ_I(
        QQ(value.re.numerator, value.re.denominator),
        QQ(value.im.numerator, value.im.denominator),
    )


def _fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def from_domain(element) -> Scalar:
    return Scalar(_fraction(element.x), _fraction(element.y))


def domain_matrix(rows: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> DomainMatrix:
    width = len(rows[0]) if rows else (ncols or 0)
    return DomainMatrix([[to_domain(value) for value in row] for row in rows], (len(rows), width), QQ_I)


def from_domain_matrix(matrix: DomainMatrix) -> Matrix:
    return [[from_domain(value) for value in row] for row in matrix.to_list()]


def rref(rows: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns. Zero rows are dropped.

    ``ncols`` is only consulted when ``rows`` is empty.
    """

    if not rows:
        return [], []
    reduced, pivots = domain_matrix(rows, ncols).rref()
    return from_domain_matrix(reduced)[: len(pivots)], list(pivots)


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int) -> Matrix:
    """Canonical basis of ``{v : rows · v = 0}``, one vector per free column."""

    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: Matrix = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [ZERO] * ncols
        vector[free] = ONE
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = -row[free]
        basis.append(vector)
    return basis


def solve(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], ncols: int) -> Optional[List[Scalar]]:
    """A solution of ``rows · v = rhs`` with free variables set to zero, or ``None``."""

    augmented = [list(row) + [value] for row, value in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    solution = [ZERO] * ncols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[ncols]
    return solution


def inverse(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    if not rows:
        return []
    try:
        return from_domain_matrix(domain_matrix(rows).inv())
    except DMNonSquareMatrixError as exc:
        raise LinearAlgebraError(f"Cannot invert a {len(rows)}x{len(rows[0])} matrix") from exc
    except DMNonInvertibleMatrixError as exc:
        raise LinearAlgebraError("Matrix is singular") from exc


def determinant(rows: Sequence[Sequence[Scalar]]) -> Scalar:
    if not rows:
        return ONE
    try:
        return from_domain(domain_matrix(rows).det())
    except DMNonSquareMatrixError as exc:
        raise LinearAlgebraError(f"Cannot take the determinant of a {len(rows)}x{len(rows[0])} matrix") from exc


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    if not a:
        return []
    if not b or not b[0]:
        return [[] for _ in a]
    if len(a[0]) != len(b):
        raise LinearAlgebraError(f"Cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    return from_domain_matrix(domain_matrix(a).matmul(domain_matrix(b)))


def transpose(a: Sequence[Sequence[Scalar]]) -> Matrix:
    return [list(column) for column in zip(*a)] if a else []


@dataclass(frozen=True)
class Subspace:
    """Subspace of k^dim held as the reduced row echelon form of its spanning set."""

    dim_ambient: int
    rows: Tuple[Tuple[Scalar, ...], ...]
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, vectors: Sequence[Sequence[Scalar]], dim_ambient: int) -> "Subspace":
        generators = [list(v) for v in vectors if any(v)]
        reduced, pivots = rref(generators, dim_ambient) if generators else ([], [])
        return cls(dim_ambient, tuple(tuple(row) for row in reduced), tuple(pivots))

    @classmethod
    def of_vectors(cls, vectors: Sequence[Vector], dim_ambient: int) -> "Subspace":
        return cls.span([v.to_dense(dim_ambient) for v in vectors], dim_ambient)

    @classmethod
    def image(cls, f: LinearMap) -> "Subspace":
        return cls.of_vectors([f.column(j) for j in range(f.dim)], f.dim)

    @classmethod
    def kernel(cls, f: LinearMap) -> "Subspace":
        return cls.span(nullspace(f.to_dense(), f.dim), f.dim)

    @classmethod
    def whole(cls, dim_ambient: int) -> "Subspace":
        return cls.of_vectors([Vector.basis(j) for j in range(dim_ambient)], dim_ambient)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> List[Vector]:
        return [Vector.from_dense(row) for row in self.rows]

    def contains(self, vector: Vector | Sequence[Scalar]) -> bool:
        values = vector.to_dense(self.dim_ambient) if isinstance(vector, Vector) else list(vector)
        for row, pivot in zip(self.rows, self.pivots):
            factor = values[pivot]
            if factor:
                values = [a - factor * b for a, b in zip(values, row)]
        return not any(values)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.rows) + list(other.rows), self.dim_ambient)

    def intersection(self, other: "Subspace") -> "Subspace":
        if not self.rows or not other.rows:
            return Subspace.span([], self.dim_ambient)
        # Solve sum a_i u_i - sum b_j w_j = 0 and map the a-part back.
        columns = [list(row) for row in self.rows] + [[-x for x in row] for row in other.rows]
        system = transpose(columns)
        relations = nullspace(system, len(columns))
        vectors = []
        for relation in relations:
            combo = [ZERO] * self.dim_ambient
            for coefficient, row in zip(relation[: len(self.rows)], self.rows):
                if coefficient:
                    combo = [a + coefficient * b for a, b in zip(combo, row)]
            vectors.append(combo)
        return Subspace.span(vectors, self.dim_ambient)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(row) for row in self.rows)
