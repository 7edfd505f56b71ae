from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, List, Sequence

from .dgbv import check_axioms, check_integral
from .errors import DgbvError
from .hodge import check_kahler_identities, check_lemma_conditions, inclusion_report
from .models.library import BundledModel
from .models.lie import check_contraction_identity, check_delta_integral
from .report import (
    Section,
    axiom_section,
    condition_section,
    error_section,
    inclusion_section,
    integral_section,
    kahler_section,
    pairing_section,
)

LOGGER = logging.getLogger(__name__)


@dataclass
class Stage:
    name: str
    run: Callable[[], Section]


@dataclass
class StageResult:
    stage: Stage
    section: Section
    duration: float

    @property
    def ok(self) -> bool:
        return self.section.ok


@dataclass
class PipelineResult:
    stages: List[StageResult]

    @property
    def ok(self) -> bool:
        return all(stage.ok for stage in self.stages)

    @property
    def sections(self) -> List[Section]:
        return [stage.section for stage in self.stages]


class StageRunner:
    """Run verification stages in order, turning library errors into failed sections."""

    def run_stage(self, stage: Stage) -> StageResult:
        start = time.perf_counter()
        try:
            section = stage.run()
        except DgbvError as exc:
            LOGGER.warning("Stage %s raised: %s", stage.name, exc)
            section = error_section(stage.name, str(exc))
        duration = time.perf_counter() - start
        LOGGER.debug("Stage %s finished in %.3fs (%s)", stage.name, duration, "ok" if section.ok else "failed")
        return StageResult(stage=stage, section=section, duration=duration)

    def run(self, stages: Sequence[Stage], *, stop_on_error: bool = False) -> PipelineResult:
        results: List[StageResult] = []
        for stage in stages:
            result = self.run_stage(stage)
            results.append(result)
            if stop_on_error and not result.ok:
                break
        return PipelineResult(stages=results)


def check_stages(model: BundledModel) -> List[Stage]:
    """Axioms, integral, the image/kernel conditions and the model-specific identities."""

    algebra = model.dgbv
    stages = [
        Stage("axioms", lambda: axiom_section(check_axioms(algebra), algebra.basis)),
        Stage("integral", lambda: integral_section(check_integral(algebra))),
        Stage("conditions", lambda: condition_section(check_lemma_conditions(algebra))),
        Stage("inclusions", lambda: inclusion_section(inclusion_report(algebra))),
    ]
    if model.exterior is not None and model.bivector:
        exterior, bivector = model.exterior, model.bivector
        stages.append(
            Stage(
                "contraction-identity",
                lambda: pairing_section("contraction-identity", check_contraction_identity(exterior, algebra.integral, bivector)),
            )
        )
    if model.exterior is not None:
        exterior = model.exterior
        stages.append(
            Stage(
                "bvop-integral",
                lambda: pairing_section("bvop-integral", check_delta_integral(exterior, algebra.integral, algebra.bvop)),
            )
        )
    if model.bigraded is not None:
        bigraded = model.bigraded
        stages.append(Stage("kahler", lambda: kahler_section(check_kahler_identities(bigraded))))
    return stages


def run_stages(stages: Sequence[Stage], *, stop_on_error: bool = False) -> PipelineResult:
    return StageRunner().run(stages, stop_on_error=stop_on_error)


def run_checks(model: BundledModel) -> PipelineResult:
    return run_stages(check_stages(model))
