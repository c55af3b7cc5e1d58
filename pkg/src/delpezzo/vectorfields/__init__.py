"""Global vector fields and automorphism stabilizers of blow-up configurations."""

from .conditions import (
    base_point_conditions,
    fixes_config,
    fixing_conditions,
    h0_vector_fields,
    tangent_condition_matrix,
    tower_conditions,
)
from .estimate import (
    NON_REDUCED,
    RESIDUAL_GUARD,
    SMOOTH,
    UNDETERMINED,
    DimFit,
    StabilizerReport,
    fallback_qs,
    fit_counts,
    reduced_dim_estimate,
    smoothness_verdict,
)
from .families import (
    FamilyCheck,
    FamilyError,
    StabFamily,
    check_family,
    family_point_count,
    family_tangent_dim,
    verify_family,
)
from .pointcount import (
    brute_force_count,
    compiled_available,
    default_backend,
    default_qs,
    pgl3_order,
    stabilizer_point_count,
)

__all__ = [
    "NON_REDUCED",
    "RESIDUAL_GUARD",
    "SMOOTH",
    "UNDETERMINED",
    "DimFit",
    "FamilyCheck",
    "FamilyError",
    "StabFamily",
    "StabilizerReport",
    "base_point_conditions",
    "brute_force_count",
    "check_family",
    "compiled_available",
    "default_backend",
    "default_qs",
    "family_point_count",
    "family_tangent_dim",
    "fallback_qs",
    "fit_counts",
    "fixes_config",
    "fixing_conditions",
    "h0_vector_fields",
    "pgl3_order",
    "reduced_dim_estimate",
    "smoothness_verdict",
    "stabilizer_point_count",
    "tangent_condition_matrix",
    "tower_conditions",
    "verify_family",
]
