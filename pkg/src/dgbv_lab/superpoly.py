"""Super-commutative polynomials over deformation variables with algebra coefficients.

A term ``m ⊗ a`` is written with the monomial on the left. Odd operators pass
the monomial with a Koszul sign, the integral acts on the coefficient from the
right, and supercontraction is a left derivation in the variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import GradingError
from .graded import LinearMap, Vector, accumulate
from .scalar import ONE, ZERO, Number, Scalar

BilinearTable = Callable[[int, int], Vector]


@dataclass(frozen=True)
class SuperVariable:
    """Deformation variable x^j dual to the cohomology class e_j."""

    index: int
    parity: int


@dataclass(frozen=True)
class VariableSet:
    variables: Tuple[SuperVariable, ...]

    @classmethod
    def from_parities(cls, parities: Sequence[int]) -> "VariableSet":
        return cls(tuple(SuperVariable(j, p % 2) for j, p in enumerate(parities)))

    def __len__(self) -> int:
        return len(self.variables)

    def parity(self, index: int) -> int:
        return self.variables[index].parity

    @property
    def parities(self) -> Tuple[int, ...]:
        return tuple(v.parity for v in self.variables)


@dataclass(frozen=True, order=True)
class SuperMonomial:
    """Canonical monomial: ``(variable, exponent)`` pairs in increasing variable order."""

    powers: Tuple[Tuple[int, int], ...] = ()

    @property
    def degree(self) -> int:
        return sum(exponent for _, exponent in self.powers)

    def parity(self, variables: VariableSet) -> int:
        return sum(exponent * variables.parity(j) for j, exponent in self.powers) % 2

    def exponent(self, index: int) -> int:
        for j, exponent in self.powers:
            if j == index:
                return exponent
        return 0

    def factors(self) -> List[int]:
        return [j for j, exponent in self.powers for _ in range(exponent)]

    def variables_used(self) -> List[int]:
        return [j for j, _ in self.powers]

    def __str__(self) -> str:
        if not self.powers:
            return "1"
        return "·".join(f"x{j}" if e == 1 else f"x{j}^{e}" for j, e in self.powers)


UNIT_MONOMIAL = SuperMonomial()


def canonicalize(factors: Sequence[int], variables: VariableSet) -> Optional[Tuple[int, SuperMonomial]]:
    """Sort a written product of variables; ``None`` when an odd variable repeats."""

    inversions = 0
    for left in range(len(factors)):
        for right in range(left + 1, len(factors)):
            a, b = factors[left], factors[right]
            if a > b and variables.parity(a) and variables.parity(b):
                inversions += 1
    counts: Dict[int, int] = {}
    for j in factors:
        counts[j] = counts.get(j, 0) + 1
        if variables.parity(j) and counts[j] > 1:
            return None
    sign = -1 if inversions % 2 else 1
    return sign, SuperMonomial(tuple(sorted(counts.items())))


def monomial_multiply(
    m1: SuperMonomial, m2: SuperMonomial, variables: VariableSet
) -> Optional[Tuple[int, SuperMonomial]]:
    """Product ``m1 · m2`` in canonical form with its Koszul sign, or ``None`` for zero."""

    if not m1.powers:
        return 1, m2
    if not m2.powers:
        return 1, m1
    odd_left = [j for j, _ in m1.powers if variables.parity(j)]
    odd_right = [j for j, _ in m2.powers if variables.parity(j)]
    if set(odd_left) & set(odd_right):
        return None
    inversions = sum(1 for u in odd_left for v in odd_right if u > v)
    exponents = dict(m1.powers)
    for j, exponent in m2.powers:
        exponents[j] = exponents.get(j, 0) + exponent
    return (-1 if inversions % 2 else 1), SuperMonomial(tuple(sorted(exponents.items())))


class SuperPolynomial:
    """Sparse element of ``K ⊗ A``: monomial -> coefficient vector in ``A``."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: VariableSet, terms: Dict[SuperMonomial, Vector] | None = None) -> None:
        self.variables = variables
        self._terms = {m: v for m, v in (terms or {}).items() if v}

    @classmethod
    def constant(cls, variables: VariableSet, vector: Vector) -> "SuperPolynomial":
        return cls(variables, {UNIT_MONOMIAL: vector})

    def items(self) -> Iterable[Tuple[SuperMonomial, Vector]]:
        return self._terms.items()

    def sorted_items(self) -> List[Tuple[SuperMonomial, Vector]]:
        return sorted(self._terms.items(), key=lambda item: (item[0].degree, item[0]))

    def monomials(self) -> List[SuperMonomial]:
        return sorted(self._terms, key=lambda m: (m.degree, m))

    def coefficient(self, monomial: SuperMonomial) -> Vector:
        return self._terms.get(monomial, Vector())

    def __iter__(self) -> Iterator[SuperMonomial]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        body = " + ".join(f"{m}⊗{v!r}" for m, v in self.sorted_items()) or "0"
        return f"SuperPolynomial({body})"

    def _same(self, other: "SuperPolynomial") -> None:
        if self.variables != other.variables:
            raise GradingError("Super-polynomials live over different variable sets")

    def __add__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        self._same(other)
        terms = dict(self._terms)
        for m, v in other._terms.items():
            terms[m] = terms[m] + v if m in terms else v
        return SuperPolynomial(self.variables, terms)

    def __neg__(self) -> "SuperPolynomial":
        return SuperPolynomial(self.variables, {m: -v for m, v in self._terms.items()})

    def __sub__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        return self + (-other)

    def scale(self, factor: Number) -> "SuperPolynomial":
        return SuperPolynomial(self.variables, {m: v.scale(factor) for m, v in self._terms.items()})

    def max_degree(self) -> int:
        return max((m.degree for m in self._terms), default=-1)

    def homogeneous_part(self, degree: int) -> "SuperPolynomial":
        return SuperPolynomial(self.variables, {m: v for m, v in self._terms.items() if m.degree == degree})

    def truncate(self, order: int) -> "SuperPolynomial":
        return SuperPolynomial(self.variables, {m: v for m, v in self._terms.items() if m.degree <= order})

    def total_parities(self, coefficient_parities: Sequence[int]) -> set:
        found = set()
        for m, v in self._terms.items():
            mp = m.parity(self.variables)
            for position, _ in v.items():
                found.add((mp + coefficient_parities[position]) % 2)
        return found

    def total_parity(self, coefficient_parities: Sequence[int]) -> int:
        """Parity of a homogeneous element: monomial parity plus coefficient parity."""

        found = self.total_parities(coefficient_parities)
        if len(found) > 1:
            raise GradingError("Super-polynomial mixes even and odd total parity")
        return found.pop() if found else 0

    def split_total_parity(self, coefficient_parities: Sequence[int]) -> Tuple["SuperPolynomial", "SuperPolynomial"]:
        even: Dict[SuperMonomial, Dict[int, Scalar]] = {}
        odd: Dict[SuperMonomial, Dict[int, Scalar]] = {}
        for m, v in self._terms.items():
            mp = m.parity(self.variables)
            for position, value in v.items():
                bucket = odd if (mp + coefficient_parities[position]) % 2 else even
                bucket.setdefault(m, {})[position] = value
        return (
            SuperPolynomial(self.variables, {m: Vector(t) for m, t in even.items()}),
            SuperPolynomial(self.variables, {m: Vector(t) for m, t in odd.items()}),
        )

    def restrict(self, keep: Iterable[int]) -> "SuperPolynomial":
        """Set every variable outside ``keep`` to zero."""

        allowed = set(keep)
        return SuperPolynomial(
            self.variables,
            {m: v for m, v in self._terms.items() if all(j in allowed for j in m.variables_used())},
        )

    def conjugate(self, real_structure: LinearMap) -> "SuperPolynomial":
        """Antilinear conjugation with real variables: conjugate coefficients, then apply ``real_structure``."""

        return SuperPolynomial(
            self.variables, {m: real_structure(v.conjugate()) for m, v in self._terms.items()}
        )

    def map_coefficients(self, f: Callable[[Vector], Vector]) -> "SuperPolynomial":
        return SuperPolynomial(self.variables, {m: f(v) for m, v in self._terms.items()})


def bilinear_extend(
    p: SuperPolynomial,
    q: SuperPolynomial,
    table: BilinearTable,
    coefficient_parities: Sequence[int],
    operation_parity: int = 0,
    max_order: Optional[int] = None,
) -> SuperPolynomial:
    """Extend a bilinear map on ``A`` to ``K ⊗ A``.

    ``(m1⊗a, m2⊗b) ↦ (-1)^{|m2|(|a|+|op|)} (m1 m2) ⊗ op(a, b)``.
    """

    p._same(q)
    variables = p.variables
    result: Dict[SuperMonomial, Dict[int, Scalar]] = {}
    for m1, a in p.items():
        for m2, b in q.items():
            if max_order is not None and m1.degree + m2.degree > max_order:
                continue
            product = monomial_multiply(m1, m2, variables)
            if product is None:
                continue
            mono_sign, monomial = product
            m2_odd = m2.parity(variables)
            bucket = result.setdefault(monomial, {})
            for i, ai in a.items():
                flip = m2_odd and (coefficient_parities[i] + operation_parity) % 2
                factor = ai * (-mono_sign if flip else mono_sign)
                for j, bj in b.items():
                    image = table(i, j)
                    if image:
                        accumulate(bucket, image, factor * bj)
    return SuperPolynomial(variables, {m: Vector(t) for m, t in result.items()})


def superpoly_multiply(
    p: SuperPolynomial,
    q: SuperPolynomial,
    product: BilinearTable,
    coefficient_parities: Sequence[int],
    max_order: Optional[int] = None,
) -> SuperPolynomial:
    """Product in ``K ⊗ A`` for the coefficient product ``product(i, j) = e_i ∧ e_j``."""

    return bilinear_extend(p, q, product, coefficient_parities, 0, max_order)


def apply_operator(f: LinearMap, p: SuperPolynomial) -> SuperPolynomial:
    """``f(m⊗a) = (-1)^{|f||m|} m⊗f(a)``."""

    terms = {}
    for m, v in p.items():
        image = f(v)
        if f.parity and m.parity(p.variables):
            image = -image
        terms[m] = image
    return SuperPolynomial(p.variables, terms)


def supercontract(index: int, p: SuperPolynomial) -> SuperPolynomial:
    """Left super-derivation ``∂/∂x^index``; the sign counts odd variables passed."""

    variables = p.variables
    odd_variable = variables.parity(index)
    result: Dict[SuperMonomial, Dict[int, Scalar]] = {}
    for m, v in p.items():
        exponent = m.exponent(index)
        if not exponent:
            continue
        passed = sum(e for j, e in m.powers if j < index and variables.parity(j)) if odd_variable else 0
        factor = Scalar(-exponent if passed % 2 else exponent)
        powers = tuple((j, e - 1) if j == index else (j, e) for j, e in m.powers)
        reduced = SuperMonomial(tuple((j, e) for j, e in powers if e))
        accumulate(result.setdefault(reduced, {}), v, factor)
    return SuperPolynomial(variables, {m: Vector(t) for m, t in result.items()})


def integrate(p: SuperPolynomial, integral: Vector) -> SuperPolynomial:
    """Right ``K``-linear integral; the result has coefficients in the one-dimensional algebra ``k``."""

    terms = {}
    for m, v in p.items():
        value = ZERO
        for position, coefficient in v.items():
            weight = integral[position]
            if weight:
                value = value + coefficient * weight
        if value:
            terms[m] = Vector({0: value})
    return SuperPolynomial(p.variables, terms)


SCALAR_PARITIES = (0,)


def _scalar_product(i: int, j: int) -> Vector:
    return Vector({0: ONE})


def series_multiply(p: SuperPolynomial, q: SuperPolynomial, max_order: Optional[int] = None) -> SuperPolynomial:
    """Product of scalar-valued series."""

    return bilinear_extend(p, q, _scalar_product, SCALAR_PARITIES, 0, max_order)


def scalar_series(variables: VariableSet, terms: Dict[SuperMonomial, Number]) -> SuperPolynomial:
    return SuperPolynomial(variables, {m: Vector({0: value}) for m, value in terms.items()})


def series_value(p: SuperPolynomial, monomial: SuperMonomial = UNIT_MONOMIAL) -> Scalar:
    return p.coefficient(monomial)[0]


def linear_term(variables: VariableSet, classes: Sequence[Vector]) -> SuperPolynomial:
    """``Σ_j x^j e_j``."""

    return SuperPolynomial(
        variables,
        {SuperMonomial(((j, 1),)): vector for j, vector in enumerate(classes)},
    )
