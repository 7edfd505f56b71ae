"""Model builders. ``comparison`` is imported on demand since it depends on the solver."""

from .exterior import ExteriorAlgebra, contraction_operator, exterior_algebra
from .kahler import BigradedModel, bigraded_kahler_model, derham_dgbv, dolbeault_dgbv, mirror_dgbv
from .library import BundledModel, bv_composite, list_models, load_bundled
from .lie import (
    CeModel,
    LieAlgebraData,
    check_contraction_identity,
    check_delta_integral,
    chevalley_eilenberg_model,
    koszul_delta,
    schouten_self_bracket,
)

__all__ = [
    "BigradedModel",
    "BundledModel",
    "CeModel",
    "ExteriorAlgebra",
    "LieAlgebraData",
    "bigraded_kahler_model",
    "bv_composite",
    "check_contraction_identity",
    "check_delta_integral",
    "chevalley_eilenberg_model",
    "contraction_operator",
    "derham_dgbv",
    "dolbeault_dgbv",
    "exterior_algebra",
    "koszul_delta",
    "list_models",
    "load_bundled",
    "mirror_dgbv",
    "schouten_self_bracket",
]
