"""Run reports: one section per verdict, rendered as text or as a machine-readable YAML document."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence

import yaml
from pydantic import BaseModel, Field

from .dgbv import AxiomReport, IntegralReport
from .frobenius import FrobeniusReport, Verdict
from .graded import GradedBasis, Vector
from .hodge import ConditionReport, InclusionReport, KahlerReport, LefschetzReport
from .models.comparison import ComparisonReport
from .models.lie import PairingReport
from .solver import MCSolution, ObstructionReport, VerificationReport
from .superpoly import SuperPolynomial

PASS, FAIL = "✅", "❌"


class Section(BaseModel):
    name: str
    ok: bool
    summary: str
    details: List[str] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)


class RunReport(BaseModel):
    model: str
    command: str
    exit_code: int = 0
    sections: List[Section] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(section.ok for section in self.sections)

    def get(self, name: str) -> Optional[Section]:
        return next((section for section in self.sections if section.name == name), None)

    def render_text(self) -> str:
        lines = [f"{self.command} {self.model}"]
        for section in self.sections:
            lines.append(f"{PASS if section.ok else FAIL} {section.name}: {section.summary}")
            lines.extend(f"    {detail}" for detail in section.details)
        lines.append(f"exit code {self.exit_code}")
        return "\n".join(lines)

    def render_machine(self) -> str:
        return yaml.safe_dump({"report": self.model_dump(mode="json")}, sort_keys=False, allow_unicode=True)

    def render(self, output_format: str) -> str:
        return self.render_machine() if output_format == "machine" else self.render_text()


def format_vector(vector: Vector, basis: Optional[GradedBasis] = None) -> str:
    if not vector:
        return "0"
    parts = []
    for i, value in sorted(vector.items()):
        name = basis[i].name if basis is not None else f"e{i}"
        parts.append(f"({value})·{name}")
    return " + ".join(parts)


def vector_data(vector: Vector) -> List[List[Any]]:
    return [[i, str(value)] for i, value in sorted(vector.items())]


def series_data(p: SuperPolynomial) -> List[Dict[str, Any]]:
    return [{"monomial": str(m), "coefficient": vector_data(v)} for m, v in p.sorted_items()]


def format_series(p: SuperPolynomial, basis: Optional[GradedBasis] = None) -> List[str]:
    return [f"{m}: {format_vector(v, basis)}" for m, v in p.sorted_items()]


def _names(basis: GradedBasis, witness: Optional[Sequence[int]]) -> str:
    return ", ".join(basis[i].name for i in witness) if witness else ""


def axiom_section(report: AxiomReport, basis: GradedBasis) -> Section:
    details = []
    for check in report.checks:
        line = f"{PASS if check.ok else FAIL} {check.name} ({check.checked} checked)"
        if not check.ok:
            line += f" witness ({_names(basis, check.witness)})"
            if check.discrepancy is not None:
                line += f" discrepancy {format_vector(check.discrepancy, basis)}"
        details.append(line)
    return Section(
        name="axioms",
        ok=report.ok,
        summary=f"{len(report.checks) - len(report.failures)}/{len(report.checks)} axioms hold",
        details=details,
        data={
            check.name: {
                "ok": check.ok,
                "checked": check.checked,
                "witness": list(check.witness) if check.witness else None,
                "discrepancy": vector_data(check.discrepancy) if check.discrepancy is not None else None,
            }
            for check in report.checks
        },
    )


def integral_section(report: IntegralReport) -> Section:
    details = [
        f"{PASS if report.is_integral else FAIL} adjointness of delta and bvop",
        f"{PASS if report.is_nice else FAIL} pairing rank {report.pairing_rank} on H(A, delta) of dimension {report.cohomology_dim}",
    ]
    if report.witness is not None:
        label, i, j = report.witness
        details.append(f"witness {label} on basis pair ({i}, {j}), discrepancy {report.discrepancy}")
    return Section(
        name="integral",
        ok=report.is_integral and report.is_nice,
        summary="integral and nice" if report.is_integral and report.is_nice else "integral check failed",
        details=details,
        data={
            "is_integral": report.is_integral,
            "is_nice": report.is_nice,
            "cohomology_dim": report.cohomology_dim,
            "pairing_rank": report.pairing_rank,
            "witness": list(report.witness) if report.witness else None,
        },
    )


def condition_section(report: ConditionReport) -> Section:
    flags = {"A": report.condition_a, "B": report.condition_b, "C": report.condition_c}
    details = [f"{PASS if ok else FAIL} condition ({label})" for label, ok in flags.items()]
    details.append(f"{PASS if report.consistent else FAIL} (A) and (B) agree with (C)")
    details.extend(f"dim {name} = {value}" for name, value in report.dims.items())
    return Section(
        name="conditions",
        ok=report.ok and report.consistent,
        summary=", ".join(f"({label}) {'holds' if ok else 'fails'}" for label, ok in flags.items()),
        details=details,
        data={
            "condition_a": report.condition_a,
            "condition_b": report.condition_b,
            "condition_c": report.condition_c,
            "consistent": report.consistent,
            "cohomology_dims_agree": report.cohomology_dims_agree,
            "dims": dict(report.dims),
        },
    )


def inclusion_section(report: InclusionReport) -> Section:
    flags = {
        "H(i) injective": report.i_injective,
        "H(i) surjective": report.i_surjective,
        "H(j) injective": report.j_injective,
        "H(j) surjective": report.j_surjective,
    }
    return Section(
        name="inclusions",
        ok=report.ok,
        summary="both inclusions induce isomorphisms" if report.ok else "an inclusion fails on cohomology",
        details=[f"{PASS if ok else FAIL} {label}" for label, ok in flags.items()],
        data={key.replace(" ", "_").replace("(", "").replace(")", ""): ok for key, ok in flags.items()},
    )


def kahler_section(report: KahlerReport) -> Section:
    return Section(
        name="kahler",
        ok=report.ok,
        summary="Kähler identities hold" if report.ok else f"{len(report.failures)} identities fail",
        details=[f"{PASS if check.ok else FAIL} {check.name}" for check in report.checks],
        data={check.name: check.ok for check in report.checks},
    )


def pairing_section(name: str, report: PairingReport) -> Section:
    details = [f"{report.checked} basis pairs checked"]
    if not report.ok:
        details.append(f"witness {report.witness}: {report.lhs} != {report.rhs}")
    return Section(
        name=name,
        ok=report.ok,
        summary="holds" if report.ok else "fails",
        details=details,
        data={"ok": report.ok, "checked": report.checked, "witness": list(report.witness) if report.witness else None},
    )


def solution_section(solution: MCSolution, verification: VerificationReport) -> Section:
    counts = solution.term_counts()
    details = [f"order {n}: {count} terms" for n, count in counts.items()]
    for n, certificate in sorted(solution.certificates.items()):
        marks = [f"Im bvop {PASS if certificate.in_image_bvop else FAIL}"]
        if certificate.in_image_adjoint_bvop is not None:
            marks.append(f"Im delta* bvop {PASS if certificate.in_image_adjoint_bvop else FAIL}")
        details.append(f"order {n} certificate: {', '.join(marks)}")
    if solution.dropped:
        details.append(f"dropped classes {solution.dropped}")
    failing = verification.failing_orders()
    details.append(f"{PASS if not failing else FAIL} Maurer-Cartan residual vanishes through order {solution.order}")
    details.append(f"{PASS if not verification.bvop_residual else FAIL} bvop Γ = 0")
    details.append(f"{PASS if verification.unit_confined else FAIL} unit variable confined to order 1")
    certified = all(
        c.in_image_bvop and c.in_image_adjoint_bvop is not False for c in solution.certificates.values()
    )
    return Section(
        name="solution",
        ok=verification.ok and certified,
        summary=f"{solution.mode} solution through order {solution.order}",
        details=details,
        data={
            "order": solution.order,
            "mode": solution.mode,
            "term_counts": counts,
            "active": list(solution.active),
            "dropped": list(solution.dropped),
            "failing_orders": failing,
            "certificates": {
                n: {"in_image_bvop": c.in_image_bvop, "in_image_adjoint_bvop": c.in_image_adjoint_bvop}
                for n, c in sorted(solution.certificates.items())
            },
        },
    )


def obstruction_section(report: ObstructionReport, basis: GradedBasis) -> Section:
    return Section(
        name="obstruction",
        ok=False,
        summary=f"obstructed at order {report.order}",
        details=["harmonic part of the order residual:", *format_series(report.harmonic, basis)],
        data={"order": report.order, "harmonic": series_data(report.harmonic), "residual": series_data(report.residual)},
    )


def _verdict_data(verdict: Verdict) -> Dict[str, Any]:
    return {
        "ok": verdict.ok,
        "checked": verdict.checked,
        "trusted_order": verdict.trusted_order,
        "witness": list(verdict.witness) if verdict.witness else None,
    }


def frobenius_section(report: FrobeniusReport) -> Section:
    data = report.data
    verdicts = {
        "metric-constancy": report.metric_constancy,
        "symmetry": report.symmetry,
        "associativity": report.associativity,
        "integrability": report.integrability,
    }
    details = ["metric g:"]
    details.extend("  " + " ".join(str(value) for value in row) for row in data.metric)
    details.append(f"product tensor, trusted through order {data.trusted_order}:")
    for (i, j, k), series in sorted(data.tensor.items()):
        for m, v in series.sorted_items():
            details.append(f"  c[{i},{j},{k}] {m}: {v[0]}")
    for name, verdict in verdicts.items():
        line = f"{PASS if verdict.ok else FAIL} {name} through order {verdict.trusted_order}"
        if not verdict.ok:
            line += f" witness {verdict.witness}"
        details.append(line)
    closed = all(report.closedness.values())
    details.append(f"{PASS if closed else FAIL} extended classes closed for the twisted differential")
    return Section(
        name="frobenius",
        ok=report.ok,
        summary=f"{len(data.tensor)} nonzero tensor entries over {data.size} classes",
        details=details,
        data={
            "metric": [[str(value) for value in row] for row in data.metric],
            "tensor": {
                f"{i},{j},{k}": [[str(m), str(v[0])] for m, v in series.sorted_items()]
                for (i, j, k), series in sorted(data.tensor.items())
            },
            "trusted_order": data.trusted_order,
            "verdicts": {name: _verdict_data(verdict) for name, verdict in verdicts.items()},
            "closedness": {str(j): ok for j, ok in sorted(report.closedness.items())},
        },
    )


def lefschetz_section(report: LefschetzReport) -> Section:
    if not report.applicable:
        return Section(
            name="lefschetz",
            ok=True,
            summary=f"not applicable: {report.reason}",
            data={"applicable": False, "reason": report.reason, "rows": []},
        )
    details = [
        f"{PASS if row.ok else FAIL} k={row.k}: dim H^{report.half_dimension - row.k} = {row.source_dim}, "
        f"dim H^{report.half_dimension + row.k} = {row.target_dim}, rank L^{row.k} = {row.rank}"
        for row in report.rows
    ]
    failing = [row.k for row in report.rows if not row.ok]
    return Section(
        name="lefschetz",
        ok=report.ok,
        summary="hard Lefschetz holds" if report.ok else f"fails at k = {', '.join(map(str, failing))}",
        details=details,
        data={
            "applicable": True,
            "half_dimension": report.half_dimension,
            "rows": [
                {"k": row.k, "source_dim": row.source_dim, "target_dim": row.target_dim, "rank": row.rank, "ok": row.ok}
                for row in report.rows
            ],
        },
    )


def error_section(name: str, message: str) -> Section:
    return Section(name=name, ok=False, summary=message)


def comparison_section(report: ComparisonReport) -> Section:
    simultaneous = report.simultaneous
    flags = {
        "Dolbeault solution verifies": simultaneous.dolbeault.ok,
        "mirror solution verifies": simultaneous.mirror.ok,
        "de Rham solution verifies": simultaneous.derham.ok,
        "solution is real": simultaneous.real,
        "second-order closed formula": simultaneous.second_order_formula,
        "independent mirror solve agrees": simultaneous.mirror_solution_agrees,
        "independent de Rham solve agrees": simultaneous.derham_solution_agrees,
        "metrics equal": report.metric_equal,
        "product tensors equal": report.tensor_equal,
        "real cohomology ring at the origin": report.real_at_origin,
    }
    details = [f"{PASS if ok else FAIL} {label}" for label, ok in flags.items()]
    if report.first_discrepancy is not None:
        details.append(f"first discrepancy at {report.first_discrepancy}")
    details.append(f"trusted through order {report.trusted_order}")
    details.extend(f"c[{i},{j},{k}](0) = {value}" for (i, j, k), value in sorted(report.origin.items()))
    return Section(
        name="comparison",
        ok=report.identical and report.real_at_origin,
        summary=report.verdict,
        details=details,
        data={
            "verdict": report.verdict,
            "trusted_order": report.trusted_order,
            "checks": {label: ok for label, ok in flags.items()},
            "first_discrepancy": list(report.first_discrepancy) if report.first_discrepancy else None,
            "origin": {f"{i},{j},{k}": str(value) for (i, j, k), value in sorted(report.origin.items())},
        },
    )
