"""Divisor classes, Mori chambers and stable reduction for m-stable genus-one curves."""

from .chambers import Chamber, Model, chamber_table, model_at
from .contraction import (
    ContractionMap,
    canonical_discrepancy,
    discrepancy_of_Ds,
    pullback,
    pushforward,
    smoothness_consistency,
)
from .dualgraph import DualGraph, arithmetic_genus, is_m_stable, minimal_elliptic_subcurve
from .errors import MStableError
from .picard import DivisorClass, MarkSet, Space, TautClass, enumerate_basis, expand
from .positivity import intersect, verify_ample_range, verify_chamber_ampleness
from .reduction import is_phi_regular_at, mstable_reduce, phi_limit
from .strata import bt_curve, enumerate_components, esigma_fiber_curve, stratum_dimension

__all__ = [
    "Chamber", "Model", "chamber_table", "model_at",
    "ContractionMap", "canonical_discrepancy", "discrepancy_of_Ds", "pullback", "pushforward",
    "smoothness_consistency",
    "DualGraph", "arithmetic_genus", "is_m_stable", "minimal_elliptic_subcurve",
    "MStableError",
    "DivisorClass", "MarkSet", "Space", "TautClass", "enumerate_basis", "expand",
    "intersect", "verify_ample_range", "verify_chamber_ampleness",
    "is_phi_regular_at", "mstable_reduce", "phi_limit",
    "bt_curve", "enumerate_components", "esigma_fiber_curve", "stratum_dimension",
]
