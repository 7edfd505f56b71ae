"""Graded bases, sparse vectors, sparse linear maps and Koszul signs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import GradingError
from .scalar import ONE, ZERO, Number, Scalar

Bidegree = Tuple[int, int]
Shift = Union[int, Bidegree]


def koszul_sign(parities: Sequence[int], permutation: Sequence[int]) -> Scalar:
    """Sign of reordering factors with the given parities.

    ``permutation[k]`` is the original position of the factor that ends up in
    slot ``k``. The sign is ``(-1)`` to the number of inverted odd-odd pairs.
    """

    if len(parities) != len(permutation):
        raise GradingError(
            f"Parity list has {len(parities)} entries but permutation has {len(permutation)}"
        )
    if sorted(permutation) != list(range(len(permutation))):
        raise GradingError(f"{list(permutation)} is not a permutation")
    inversions = 0
    for left in range(len(permutation)):
        for right in range(left + 1, len(permutation)):
            a, b = permutation[left], permutation[right]
            if a > b and parities[a] % 2 and parities[b] % 2:
                inversions += 1
    return -ONE if inversions % 2 else ONE


@dataclass(frozen=True)
class BasisElement:
    """Named homogeneous basis vector of a graded space."""

    name: str
    degree: int
    bidegree: Optional[Bidegree] = None

    @property
    def parity(self) -> int:
        return self.degree % 2

    @property
    def grading(self) -> Shift:
        return self.bidegree if self.bidegree is not None else self.degree


@dataclass(frozen=True)
class GradedBasis:
    """Ordered basis of a (bi)graded vector space."""

    elements: Tuple[BasisElement, ...]
    _index: Dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        index: Dict[str, int] = {}
        bigraded = None
        for position, element in enumerate(self.elements):
            if element.name in index:
                raise GradingError(f"Duplicate basis name '{element.name}'")
            index[element.name] = position
            if element.bidegree is not None and sum(element.bidegree) != element.degree:
                raise GradingError(
                    f"Basis element '{element.name}' has bidegree {element.bidegree} "
                    f"but degree {element.degree}"
                )
            has_bidegree = element.bidegree is not None
            if bigraded is None:
                bigraded = has_bidegree
            elif bigraded != has_bidegree:
                raise GradingError("Either every basis element carries a bidegree or none does")
        self._index.update(index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, Union[int, Bidegree]]]) -> "GradedBasis":
        elements = []
        for name, grading in pairs:
            if isinstance(grading, tuple):
                elements.append(BasisElement(name, grading[0] + grading[1], (grading[0], grading[1])))
            else:
                elements.append(BasisElement(name, int(grading)))
        return cls(tuple(elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[BasisElement]:
        return iter(self.elements)

    def __getitem__(self, position: int) -> BasisElement:
        return self.elements[position]

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def bigraded(self) -> bool:
        return bool(self.elements) and self.elements[0].bidegree is not None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError as exc:
            raise GradingError(f"Unknown basis element '{name}'") from exc

    def parity(self, position: int) -> int:
        return self.elements[position].parity

    @property
    def parities(self) -> Tuple[int, ...]:
        return tuple(element.parity for element in self.elements)

    def blocks(self) -> Dict[Shift, List[int]]:
        """Group basis indices by grading, ordered by total degree then bidegree."""

        groups: Dict[Shift, List[int]] = {}
        for position, element in enumerate(self.elements):
            groups.setdefault(element.grading, []).append(position)
        ordered = sorted(groups, key=lambda g: (sum(g), g) if isinstance(g, tuple) else (g, ()))
        return {grading: groups[grading] for grading in ordered}

    def top_degree(self) -> int:
        return max(element.degree for element in self.elements)


class Vector:
    """Sparse vector: basis index -> nonzero Scalar."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Number] | None = None) -> None:
        cleaned: Dict[int, Scalar] = {}
        for position, value in (terms or {}).items():
            scalar = Scalar.coerce(value)
            if scalar:
                cleaned[int(position)] = scalar
        self._terms = cleaned

    @classmethod
    def basis(cls, position: int, coefficient: Number = ONE) -> "Vector":
        return cls({position: coefficient})

    @classmethod
    def from_dense(cls, values: Sequence[Number]) -> "Vector":
        return cls({position: value for position, value in enumerate(values)})

    @classmethod
    def _raw(cls, terms: Dict[int, Scalar]) -> "Vector":
        vector = cls.__new__(cls)
        vector._terms = terms
        return vector

    def items(self):
        return self._terms.items()

    def support(self) -> List[int]:
        return sorted(self._terms)

    def __getitem__(self, position: int) -> Scalar:
        return self._terms.get(position, ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self._terms.items()))
        return f"Vector({{{body}}})"

    def __add__(self, other: "Vector") -> "Vector":
        terms = dict(self._terms)
        for position, value in other._terms.items():
            total = terms.get(position, ZERO) + value
            if total:
                terms[position] = total
            else:
                terms.pop(position, None)
        return Vector._raw(terms)

    def __neg__(self) -> "Vector":
        return Vector._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "Vector") -> "Vector":
        return self + (-other)

    def scale(self, factor: Number) -> "Vector":
        factor = Scalar.coerce(factor)
        if not factor:
            return Vector()
        return Vector._raw({k: v * factor for k, v in self._terms.items()})

    def __rmul__(self, factor: Number) -> "Vector":
        return self.scale(factor)

    def conjugate(self) -> "Vector":
        return Vector._raw({k: v.conjugate() for k, v in self._terms.items()})

    def to_dense(self, dim: int) -> List[Scalar]:
        values = [ZERO] * dim
        for position, value in self._terms.items():
            if position >= dim:
                raise GradingError(f"Vector index {position} out of range for dimension {dim}")
            values[position] = value
        return values

    def grading(self, basis: GradedBasis) -> Optional[Shift]:
        """Grading shared by the whole support, or ``None`` when mixed."""

        gradings = {basis[position].grading for position in self._terms}
        if len(gradings) == 1:
            return gradings.pop()
        return None

    def parity(self, basis: GradedBasis) -> int:
        parities = {basis.parity(position) for position in self._terms}
        if len(parities) > 1:
            raise GradingError(f"{self!r} mixes even and odd components")
        return parities.pop() if parities else 0

    def split_parity(self, basis: GradedBasis) -> Tuple["Vector", "Vector"]:
        even = {k: v for k, v in self._terms.items() if not basis.parity(k)}
        odd = {k: v for k, v in self._terms.items() if basis.parity(k)}
        return Vector._raw(even), Vector._raw(odd)


def accumulate(target: Dict[int, Scalar], vector: Vector, factor: Number = ONE) -> None:
    """Add ``factor * vector`` into a mutable sparse accumulator in place."""

    factor = Scalar.coerce(factor)
    for position, value in vector.items():
        total = target.get(position, ZERO) + value * factor
        if total:
            target[position] = total
        else:
            target.pop(position, None)


def shift_parity(shift: Shift) -> int:
    return (shift[0] + shift[1]) % 2 if isinstance(shift, tuple) else shift % 2


def negate_shift(shift: Shift | None) -> Shift | None:
    if shift is None:
        return None
    if isinstance(shift, tuple):
        return (-shift[0], -shift[1])
    return -shift


def _shifted(grading: Shift, shift: Shift) -> Shift:
    if isinstance(grading, tuple) and isinstance(shift, tuple):
        return (grading[0] + shift[0], grading[1] + shift[1])
    if isinstance(grading, tuple):
        return sum(grading) + shift  # type: ignore[operator]
    if isinstance(shift, tuple):
        return grading + sum(shift)
    return grading + shift


class LinearMap:
    """Sparse linear endomorphism stored by columns with a declared degree shift.

    ``columns[j]`` is the image of basis vector ``j``. A shift of ``None`` marks
    a map without a homogeneous degree (such as a Laplacian's Green operator
    in degenerate cases); it is never validated.
    """

    __slots__ = ("dim", "shift", "_columns")

    def __init__(self, dim: int, columns: Mapping[int, Vector] | None = None, shift: Shift | None = 0) -> None:
        self.dim = dim
        self.shift = shift
        self._columns: Dict[int, Vector] = {
            int(j): column for j, column in (columns or {}).items() if column
        }

    @classmethod
    def from_entries(
        cls, dim: int, entries: Iterable[Tuple[int, int, Number]], shift: Shift | None = 0
    ) -> "LinearMap":
        columns: Dict[int, Dict[int, Scalar]] = {}
        for row, column, value in entries:
            if not (0 <= row < dim and 0 <= column < dim):
                raise GradingError(f"Entry ({row}, {column}) out of range for dimension {dim}")
            bucket = columns.setdefault(column, {})
            bucket[row] = bucket.get(row, ZERO) + Scalar.coerce(value)
        return cls(dim, {j: Vector(rows) for j, rows in columns.items()}, shift)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Number]], shift: Shift | None = 0) -> "LinearMap":
        dim = len(rows)
        entries = [(i, j, rows[i][j]) for i in range(dim) for j in range(dim) if rows[i][j]]
        return cls.from_entries(dim, entries, shift)

    @classmethod
    def identity(cls, dim: int) -> "LinearMap":
        return cls(dim, {j: Vector.basis(j) for j in range(dim)}, 0)

    @classmethod
    def zero(cls, dim: int, shift: Shift | None = 0) -> "LinearMap":
        return cls(dim, {}, shift)

    def column(self, j: int) -> Vector:
        return self._columns.get(j, Vector())

    def entries(self) -> Iterator[Tuple[int, int, Scalar]]:
        for j in sorted(self._columns):
            for i, value in sorted(self._columns[j].items()):
                yield i, j, value

    def entry(self, row: int, column: int) -> Scalar:
        return self.column(column)[row]

    @property
    def parity(self) -> int:
        return shift_parity(self.shift) if self.shift is not None else 0

    def __call__(self, vector: Vector) -> Vector:
        result: Dict[int, Scalar] = {}
        for j, value in vector.items():
            column = self._columns.get(j)
            if column is not None:
                accumulate(result, column, value)
        return Vector._raw(result)

    def __bool__(self) -> bool:
        return bool(self._columns)

    def _combined_shift(self, other: "LinearMap") -> Shift | None:
        if self.shift is None or other.shift is None:
            return None
        if self.shift == other.shift:
            return self.shift
        if not self:
            return other.shift
        if not other:
            return self.shift
        total = sum(self.shift) if isinstance(self.shift, tuple) else self.shift
        other_total = sum(other.shift) if isinstance(other.shift, tuple) else other.shift
        return total if total == other_total else None

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition ``self ∘ other``."""

        self._check_dim(other)
        shift: Shift | None
        if self.shift is None or other.shift is None:
            shift = None
        else:
            shift = _shifted(other.shift, self.shift)
        return LinearMap(self.dim, {j: self(column) for j, column in other._columns.items()}, shift)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check_dim(other)
        columns = dict(self._columns)
        for j, column in other._columns.items():
            columns[j] = columns[j] + column if j in columns else column
        return LinearMap(self.dim, columns, self._combined_shift(other))

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.dim, {j: -column for j, column in self._columns.items()}, self.shift)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-other)

    def scale(self, factor: Number) -> "LinearMap":
        return LinearMap(self.dim, {j: column.scale(factor) for j, column in self._columns.items()}, self.shift)

    def __rmul__(self, factor: Number) -> "LinearMap":
        return self.scale(factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.dim == other.dim and self._columns == other._columns

    def __hash__(self) -> int:
        return hash((self.dim, frozenset((j, c) for j, c in self._columns.items())))

    def __repr__(self) -> str:
        return f"LinearMap(dim={self.dim}, shift={self.shift}, nonzero={sum(len(c) for c in self._columns.values())})"

    def with_shift(self, shift: Shift | None) -> "LinearMap":
        return LinearMap(self.dim, self._columns, shift)

    def conjugate_transpose(self) -> "LinearMap":
        entries = [(j, i, value.conjugate()) for i, j, value in self.entries()]
        return LinearMap.from_entries(self.dim, entries, None)

    def to_dense(self) -> List[List[Scalar]]:
        rows = [[ZERO] * self.dim for _ in range(self.dim)]
        for i, j, value in self.entries():
            rows[i][j] = value
        return rows

    def check_shift(self, basis: GradedBasis) -> List[Tuple[int, int]]:
        """Entries ``(row, column)`` that violate the declared shift."""

        if self.shift is None:
            return []
        violations = []
        for i, j, _ in self.entries():
            expected = _shifted(basis[j].grading, self.shift)
            actual = basis[i].grading
            if isinstance(expected, tuple) != isinstance(actual, tuple):
                expected = sum(expected) if isinstance(expected, tuple) else expected
                actual = sum(actual) if isinstance(actual, tuple) else actual
            if expected != actual:
                violations.append((i, j))
        return violations

    def _check_dim(self, other: "LinearMap") -> None:
        if self.dim != other.dim:
            raise GradingError(f"Dimension mismatch: {self.dim} vs {other.dim}")


def supercommutator(f: LinearMap, g: LinearMap) -> LinearMap:
    """``fg - (-1)^{|f||g|} gf``."""

    if f.parity and g.parity:
        return f @ g + g @ f
    return f @ g - g @ f


def rational(value: int, denominator: int = 1) -> Scalar:
    return Scalar(Fraction(value, denominator))
