"""YAML model and solution documents.

Documents are validated with pydantic, then built into algebra objects. Errors
carry the line and column of the offending node whenever the YAML tree can
locate it.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, model_validator

from .dgbv import DgbvAlgebra, GradedAlgebra
from .errors import DgbvError, ModelFileError
from .graded import BasisElement, GradedBasis, LinearMap, Shift, Vector
from .hodge import InnerProduct
from .models.exterior import bivector_terms
from .models.kahler import BigradedModel
from .models.library import BundledModel
from .models.lie import LieAlgebraData, chevalley_eilenberg_model, koszul_delta
from .scalar import I, Scalar
from .solver import MCSolution
from .superpoly import SuperMonomial, SuperPolynomial, VariableSet

LOGGER = logging.getLogger(__name__)

Ref = Union[StrictInt, str]
ScalarText = Union[StrictInt, str]


class BasisEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    degree: Optional[int] = None
    bidegree: Optional[Tuple[int, int]] = None

    @model_validator(mode="after")
    def _one_grading(self) -> "BasisEntry":
        if self.degree is None and self.bidegree is None:
            raise ValueError("basis entry needs 'degree' or 'bidegree'")
        if self.degree is not None and self.bidegree is not None and sum(self.bidegree) != self.degree:
            raise ValueError("'degree' must equal the sum of 'bidegree'")
        return self


class OperatorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    shift: Optional[Union[int, Tuple[int, int]]] = None
    entries: List[Tuple[Ref, Ref, ScalarText]] = Field(default_factory=list)


class LieSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dimension: int = Field(ge=1)
    constants: List[Tuple[int, int, int, ScalarText]] = Field(default_factory=list)
    generators: Optional[List[str]] = None


class ModelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    kind: Literal["dgbv", "bigraded", "lie"] = "dgbv"
    description: str = ""
    basis: List[BasisEntry] = Field(default_factory=list)
    unit: Ref = 0
    products: List[Tuple[Ref, Ref, Ref, ScalarText]] = Field(default_factory=list)
    operators: Dict[str, OperatorSpec] = Field(default_factory=dict)
    integral: List[Tuple[Ref, ScalarText]] = Field(default_factory=list)
    inner_product: Optional[List[Tuple[Ref, Ref, ScalarText]]] = None
    lie: Optional[LieSpec] = None
    bivector: List[Tuple[int, int, ScalarText]] = Field(default_factory=list)
    omega: List[Tuple[Ref, ScalarText]] = Field(default_factory=list)
    real_structure: List[Tuple[Ref, Ref, ScalarText]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _kind_fields(self) -> "ModelDocument":
        if self.kind == "lie":
            if self.lie is None:
                raise ValueError("kind 'lie' requires a 'lie' section")
        elif not self.basis:
            raise ValueError(f"kind '{self.kind}' requires a non-empty 'basis'")
        if self.kind == "bigraded":
            missing = {"partial", "dbar"} - set(self.operators)
            if missing:
                raise ValueError(f"kind 'bigraded' requires operators {sorted(missing)}")
        return self


class _Locator:
    """Map a document path such as ``("products", 3, 2)`` to a YAML mark."""

    def __init__(self, text: str) -> None:
        try:
            self.root = yaml.compose(text)
        except yaml.YAMLError:
            self.root = None

    def find(self, path: Sequence[Any]) -> Tuple[Optional[int], Optional[int]]:
        node = self.root
        for key in path:
            if isinstance(node, yaml.MappingNode):
                node = next((value for k, value in node.value if k.value == str(key)), None)
            elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
                node = node.value[key]
            else:
                break
            if node is None:
                return None, None
        if node is None:
            return None, None
        return node.start_mark.line + 1, node.start_mark.column + 1


class _Builder:
    def __init__(self, document: ModelDocument, locator: _Locator) -> None:
        self.document = document
        self.locator = locator
        self.basis: Optional[GradedBasis] = None

    def fail(self, message: str, *path: Any) -> ModelFileError:
        line, column = self.locator.find(path)
        where = ".".join(str(p) for p in path)
        return ModelFileError(f"{message} at '{where}'", line, column)

    def scalar(self, text: ScalarText, *path: Any) -> Scalar:
        try:
            return Scalar.parse(text)
        except DgbvError as exc:
            raise self.fail(str(exc), *path) from exc

    def index(self, ref: Ref, *path: Any) -> int:
        assert self.basis is not None
        if isinstance(ref, int):
            if not 0 <= ref < self.basis.dim:
                raise self.fail(f"Index {ref} out of range for dimension {self.basis.dim}", *path)
            return ref
        try:
            return self.basis.index(ref)
        except DgbvError as exc:
            raise self.fail(str(exc), *path) from exc

    def build_basis(self) -> GradedBasis:
        elements = []
        for entry in self.document.basis:
            degree = entry.degree if entry.degree is not None else sum(entry.bidegree)  # type: ignore[arg-type]
            elements.append(BasisElement(entry.name, degree, entry.bidegree))
        try:
            self.basis = GradedBasis(tuple(elements))
        except DgbvError as exc:
            raise self.fail(str(exc), "basis") from exc
        return self.basis

    def build_algebra(self) -> GradedAlgebra:
        basis = self.build_basis()
        unit = self.index(self.document.unit, "unit")
        table: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
        seen = set()
        for j in range(basis.dim):
            table[(unit, j)] = {j: Scalar(1)}
            table[(j, unit)] = {j: Scalar(1)}
        for n, (a, b, c, value) in enumerate(self.document.products):
            i, j, k = (self.index(ref, "products", n, slot) for slot, ref in enumerate((a, b, c)))
            if unit in (i, j):
                raise self.fail("Products with the unit are implied and must not be listed", "products", n)
            if (i, j, k) in seen:
                raise self.fail(f"Duplicate product entry ({i}, {j}, {k})", "products", n)
            seen.add((i, j, k))
            table.setdefault((i, j), {})[k] = self.scalar(value, "products", n, 3)
        return GradedAlgebra(basis, {key: Vector(row) for key, row in table.items()}, unit)

    def operator(self, name: str, default_shift: Shift, required: bool = True) -> LinearMap:
        assert self.basis is not None
        spec = self.document.operators.get(name)
        if spec is None:
            if required:
                raise self.fail(f"Missing operator '{name}'", "operators")
            return LinearMap.zero(self.basis.dim, default_shift)
        entries, seen = [], set()
        for n, (row, column, value) in enumerate(spec.entries):
            i = self.index(row, "operators", name, "entries", n, 0)
            j = self.index(column, "operators", name, "entries", n, 1)
            if (i, j) in seen:
                raise self.fail(f"Duplicate entry ({i}, {j})", "operators", name, "entries", n)
            seen.add((i, j))
            entries.append((i, j, self.scalar(value, "operators", name, "entries", n, 2)))
        shift = spec.shift if spec.shift is not None else default_shift
        if isinstance(shift, list):
            shift = tuple(shift)
        return LinearMap.from_entries(self.basis.dim, entries, shift)

    def vector(self, field_name: str, pairs: Sequence[Tuple[Ref, ScalarText]]) -> Vector:
        terms: Dict[int, Scalar] = {}
        for n, (ref, value) in enumerate(pairs):
            i = self.index(ref, field_name, n, 0)
            if i in terms:
                raise self.fail(f"Duplicate entry for index {i}", field_name, n)
            terms[i] = self.scalar(value, field_name, n, 1)
        return Vector(terms)

    def inner_product(self) -> InnerProduct:
        assert self.basis is not None
        if self.document.inner_product is None:
            return InnerProduct.standard(self.basis)
        n = self.basis.dim
        gram = [[Scalar(0)] * n for _ in range(n)]
        seen = set()
        for k, (a, b, value) in enumerate(self.document.inner_product):
            i, j = self.index(a, "inner_product", k, 0), self.index(b, "inner_product", k, 1)
            if (i, j) in seen or (j, i) in seen:
                raise self.fail(f"Duplicate inner-product entry ({i}, {j})", "inner_product", k)
            seen.add((i, j))
            scalar = self.scalar(value, "inner_product", k, 2)
            gram[i][j] = scalar
            gram[j][i] = scalar.conjugate() if i != j else scalar
        try:
            return InnerProduct(self.basis, gram)
        except DgbvError as exc:
            raise self.fail(str(exc), "inner_product") from exc

    def build(self) -> BundledModel:
        doc = self.document
        try:
            if doc.kind == "lie":
                return self._build_lie()
            algebra = self.build_algebra()
            integral = self.vector("integral", doc.integral)
            omega = self.vector("omega", doc.omega) if doc.omega else None
            ip = self.inner_product()
            if doc.kind == "bigraded":
                if not doc.real_structure:
                    raise self.fail("Kind 'bigraded' requires a 'real_structure' section", "real_structure")
                real = LinearMap.from_entries(
                    algebra.dim,
                    [
                        (self.index(a, "real_structure", n, 0), self.index(b, "real_structure", n, 1), self.scalar(v, "real_structure", n, 2))
                        for n, (a, b, v) in enumerate(doc.real_structure)
                    ],
                    None,
                )
                model = BigradedModel(
                    name=doc.name,
                    algebra=algebra,
                    partial=self.operator("partial", (1, 0)),
                    dbar=self.operator("dbar", (0, 1)),
                    inner_product=ip,
                    omega=omega or Vector(),
                    real_structure=real,
                    integral=integral,
                )
                # Kähler identities are reported by the checks, not enforced on load.
                dgbv = DgbvAlgebra(
                    algebra, model.dbar, ip.adjoint(model.partial).scale(-I), integral, name=f"{doc.name}/dolbeault"
                )
                return BundledModel(doc.name, doc.description, dgbv, ip, omega, bigraded=model)
            dgbv = DgbvAlgebra(algebra, self.operator("delta", 1, False), self.operator("bvop", -1, False), integral, doc.name)
            return BundledModel(doc.name, doc.description, dgbv, ip, omega)
        except ModelFileError:
            raise
        except DgbvError as exc:
            raise ModelFileError(f"Model '{doc.name}' is inconsistent: {exc}") from exc

    def _build_lie(self) -> BundledModel:
        doc = self.document
        spec = doc.lie
        assert spec is not None
        constants = {}
        for n, (i, j, k, value) in enumerate(spec.constants):
            if (i, j, k) in constants:
                raise self.fail(f"Duplicate structure constant ({i}, {j}, {k})", "lie", "constants", n)
            constants[(i, j, k)] = self.scalar(value, "lie", "constants", n, 3)
        lie = LieAlgebraData.from_constants(spec.dimension, constants, name=doc.name)
        ce = chevalley_eilenberg_model(lie, spec.generators)
        self.basis = ce.exterior.basis
        bivector = {(i, j): self.scalar(value, "bivector", n, 2) for n, (i, j, value) in enumerate(doc.bivector)}
        bvop = koszul_delta(ce.exterior, bivector, ce.d, lie)
        omega = self.vector("omega", doc.omega) if doc.omega else None
        return BundledModel(
            doc.name,
            doc.description,
            ce.dgbv(bvop, name=doc.name),
            InnerProduct.standard(ce.exterior.basis) if doc.inner_product is None else self.inner_product(),
            omega,
            lie=lie,
            exterior=ce.exterior,
            bivector=bivector,
        )


def _parse_yaml(text: str) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        column = mark.column + 1 if mark is not None else None
        raise ModelFileError(f"Malformed YAML: {getattr(exc, 'problem', exc)}", line, column) from exc


def parse_model(text: str) -> BundledModel:
    raw = _parse_yaml(text)
    locator = _Locator(text)
    if not isinstance(raw, dict):
        raise ModelFileError("Model document must be a mapping", 1, 1)
    try:
        document = ModelDocument(**raw)
    except ValidationError as exc:
        error = exc.errors()[0]
        line, column = locator.find(error["loc"])
        where = ".".join(str(p) for p in error["loc"])
        raise ModelFileError(f"{error['msg']} at '{where}'", line, column) from exc
    model = _Builder(document, locator).build()
    LOGGER.info("Loaded model '%s' (%s, dimension %d)", document.name, document.kind, model.dgbv.dim)
    return model


def load_model(path: Path) -> BundledModel:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"Cannot read model file {path}: {exc.strerror}") from exc
    return parse_model(text)


def _pairs(vector: Vector) -> List[List[Any]]:
    return [[i, str(value)] for i, value in sorted(vector.items())]


def _operator_spec(f: LinearMap) -> Dict[str, Any]:
    shift = list(f.shift) if isinstance(f.shift, tuple) else f.shift
    return {"shift": shift, "entries": [[i, j, str(value)] for i, j, value in f.entries()]}


def _lie_document(model: BundledModel) -> Dict[str, Any]:
    lie, exterior = model.lie, model.exterior
    assert lie is not None and exterior is not None
    document: Dict[str, Any] = {
        "name": model.name,
        "kind": "lie",
        "description": model.description,
        "lie": {
            "dimension": lie.dim,
            "constants": [[i, j, k, str(value)] for (i, j, k), value in sorted(lie.constants.items())],
            "generators": list(exterior.generators),
        },
        "bivector": [[i, j, str(value)] for i, j, value in bivector_terms(model.bivector)],
    }
    _append_metric_and_class(document, model)
    return document


def _append_metric_and_class(document: Dict[str, Any], model: BundledModel) -> None:
    gram = model.inner_product.gram
    document["inner_product"] = [
        [i, j, str(gram[i][j])] for i in range(len(gram)) for j in range(i, len(gram)) if gram[i][j]
    ]
    if model.omega is not None:
        document["omega"] = _pairs(model.omega)


def model_document(model: BundledModel) -> Dict[str, Any]:
    """Plain-data form of a model; indices are positions in ``basis``.

    Lie-kind models keep their structure constants and bivector, so reloading
    rebuilds the Chevalley-Eilenberg complex and the Koszul operator.
    """

    if model.lie is not None and model.exterior is not None:
        return _lie_document(model)
    algebra = model.dgbv.algebra
    basis = algebra.basis
    unit = algebra.unit
    document: Dict[str, Any] = {
        "name": model.name,
        "kind": "bigraded" if model.bigraded is not None else "dgbv",
        "description": model.description,
        "basis": [
            {"name": e.name, "bidegree": list(e.bidegree)} if e.bidegree is not None else {"name": e.name, "degree": e.degree}
            for e in basis
        ],
        "unit": unit,
        "products": [
            [i, j, k, str(value)]
            for (i, j), image in sorted(algebra.table.items())
            if unit not in (i, j)
            for k, value in sorted(image.items())
        ],
    }
    if model.bigraded is not None:
        document["operators"] = {
            "partial": _operator_spec(model.bigraded.partial),
            "dbar": _operator_spec(model.bigraded.dbar),
        }
        document["real_structure"] = [[i, j, str(value)] for i, j, value in model.bigraded.real_structure.entries()]
    else:
        document["operators"] = {"delta": _operator_spec(model.dgbv.delta), "bvop": _operator_spec(model.dgbv.bvop)}
    document["integral"] = _pairs(model.dgbv.integral)
    _append_metric_and_class(document, model)
    return document


def dump_model(model: BundledModel) -> str:
    return yaml.safe_dump(model_document(model), sort_keys=False, allow_unicode=True)


class SolutionTerm(BaseModel):
    order: int = Field(ge=1)
    monomial: List[Tuple[int, int]]
    coefficient: List[Tuple[int, ScalarText]]


class SolutionDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    model: str
    order: int = Field(ge=1)
    mode: Literal["analytic", "normalized"] = "analytic"
    parities: List[int]
    classes: List[List[Tuple[int, ScalarText]]]
    active: List[int] = Field(default_factory=list)
    dropped: List[int] = Field(default_factory=list)
    terms: List[SolutionTerm] = Field(default_factory=list)


def solution_document(solution: MCSolution, model_name: str) -> Dict[str, Any]:
    terms = []
    for n in sorted(solution.terms):
        for monomial, vector in solution.terms[n].sorted_items():
            terms.append(
                {"order": n, "monomial": [list(p) for p in monomial.powers], "coefficient": _pairs(vector)}
            )
    return {
        "model": model_name,
        "order": solution.order,
        "mode": solution.mode,
        "parities": list(solution.variables.parities),
        "classes": [_pairs(vector) for vector in solution.classes],
        "active": list(solution.active),
        "dropped": list(solution.dropped),
        "terms": terms,
    }


def dump_solution(solution: MCSolution, model_name: str) -> str:
    return yaml.safe_dump({"solution": solution_document(solution, model_name)}, sort_keys=False)


def parse_solution(text: str) -> MCSolution:
    raw = _parse_yaml(text)
    if not isinstance(raw, dict) or "solution" not in raw:
        raise ModelFileError("Solution document needs a top-level 'solution' key", 1, 1)
    try:
        document = SolutionDocument(**raw["solution"])
    except ValidationError as exc:
        error = exc.errors()[0]
        line, column = _Locator(text).find(("solution", *error["loc"]))
        raise ModelFileError(f"{error['msg']} at 'solution.{'.'.join(str(p) for p in error['loc'])}'", line, column) from exc
    try:
        variables = VariableSet.from_parities(document.parities)
        classes = [Vector({i: Scalar.parse(v) for i, v in pairs}) for pairs in document.classes]
        grouped: Dict[int, Dict[SuperMonomial, Vector]] = {}
        for term in document.terms:
            monomial = SuperMonomial(tuple((j, e) for j, e in term.monomial))
            grouped.setdefault(term.order, {})[monomial] = Vector({i: Scalar.parse(v) for i, v in term.coefficient})
    except DgbvError as exc:
        raise ModelFileError(f"Invalid solution entry: {exc}") from exc
    return MCSolution(
        variables=variables,
        classes=classes,
        terms={n: SuperPolynomial(variables, terms) for n, terms in grouped.items()},
        order=document.order,
        mode=document.mode,
        active=document.active,
        dropped=document.dropped,
    )


def parse_class_spec(text: str, basis: GradedBasis) -> Vector:
    """``"e1^e3, e2^e4=-1/2"``: comma-separated basis names, each with an optional ``=scalar``."""

    terms: Dict[int, Scalar] = {}
    for part in (piece.strip() for piece in text.split(",")):
        if not part:
            continue
        name, _, value = part.partition("=")
        try:
            index = basis.index(name.strip())
            scalar = Scalar.parse(value.strip()) if value else Scalar(1)
        except DgbvError as exc:
            raise ModelFileError(f"Invalid class spec '{text}': {exc}") from exc
        if index in terms:
            raise ModelFileError(f"Invalid class spec '{text}': '{name.strip()}' appears twice")
        terms[index] = scalar
    if not terms:
        raise ModelFileError("Class spec is empty")
    return Vector(terms)


def load_solution(path: Path) -> MCSolution:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"Cannot read solution file {path}: {exc.strerror}") from exc
    return parse_solution(text)
