"""Gauge functionals q_K and dual norms ||·||_K for the tensor, vee and wedge families."""

from .bracket import (
    INF,
    Decomposition,
    NormBracket,
    Witness,
    q_bracket,
    verify_decomposition,
    wedge_to_product_pairs,
)
from .closed_form import q_pure_closed_form
from .compat import CompatibilityReport, ContractionReport, check_compatibility, check_contraction
from .families import in_family, maximize_overlap, random_member
from .knorm import KNormEstimate, certified_norm_upper, estimate_K_norm
from .spec import Budget, VSetSpec
from .verdict import Coupling, Status, Verdict, classify, fermionic_coupling, verdict

__all__ = [
    "INF",
    "Budget",
    "CompatibilityReport",
    "ContractionReport",
    "Coupling",
    "Decomposition",
    "KNormEstimate",
    "NormBracket",
    "Status",
    "VSetSpec",
    "Verdict",
    "Witness",
    "certified_norm_upper",
    "check_compatibility",
    "check_contraction",
    "classify",
    "estimate_K_norm",
    "fermionic_coupling",
    "in_family",
    "maximize_overlap",
    "q_bracket",
    "q_pure_closed_form",
    "random_member",
    "verdict",
    "verify_decomposition",
    "wedge_to_product_pairs",
]
