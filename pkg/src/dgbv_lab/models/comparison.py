"""De Rham against Dolbeault: the two Frobenius structures of a Kähler-type model."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..frobenius import FrobeniusData, evaluate_at_origin, product_tensor
from ..scalar import Scalar
from ..solver import MCSolution, SimultaneousReport, simultaneous_solve
from .kahler import BigradedModel, derham_dgbv, dolbeault_dgbv

LOGGER = logging.getLogger(__name__)


@dataclass
class ComparisonReport:
    model: str
    solution: MCSolution
    simultaneous: SimultaneousReport
    dolbeault: FrobeniusData
    derham: FrobeniusData
    metric_equal: bool
    tensor_equal: bool
    origin: Dict[Tuple[int, int, int], Scalar]
    real_at_origin: bool
    first_discrepancy: Optional[Tuple[int, ...]] = None

    @property
    def identical(self) -> bool:
        return self.metric_equal and self.tensor_equal and self.simultaneous.ok

    @property
    def verdict(self) -> str:
        return "IDENTICAL" if self.identical else "DIFFERENT"

    @property
    def trusted_order(self) -> int:
        return self.dolbeault.trusted_order


def _first_difference(left: FrobeniusData, right: FrobeniusData) -> Optional[Tuple[int, ...]]:
    n = left.size
    for i in range(n):
        for j in range(n):
            if left.metric[i][j] != right.metric[i][j]:
                return (i, j)
    for index in sorted(set(left.tensor) | set(right.tensor)):
        if left.c(*index) != right.c(*index):
            return index
    return None


def compare_structures(model: BigradedModel, order: int = 4) -> ComparisonReport:
    """Solve once over a real harmonic basis and compare both Frobenius tensors exactly."""

    solution, simultaneous = simultaneous_solve(model, order)
    dolbeault = product_tensor(dolbeault_dgbv(model), solution)
    derham = product_tensor(derham_dgbv(model), solution)
    origin = evaluate_at_origin(dolbeault)
    report = ComparisonReport(
        model=model.name,
        solution=solution,
        simultaneous=simultaneous,
        dolbeault=dolbeault,
        derham=derham,
        metric_equal=dolbeault.metric == derham.metric,
        tensor_equal=dolbeault.tensor == derham.tensor,
        origin=origin,
        real_at_origin=all(value.is_real for value in origin.values()),
        first_discrepancy=_first_difference(dolbeault, derham),
    )
    LOGGER.info("Comparison on %s: %s", model.name, report.verdict)
    return report
