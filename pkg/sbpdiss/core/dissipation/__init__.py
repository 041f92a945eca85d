"""Volume dissipation operators."""

from sbpdiss.core.dissipation.assembly import (
    DissipationOperator,
    apply_dissipation_2d,
    assemble_scalar_dissipation,
    build_dissipation,
)
from sbpdiss.core.dissipation.coefficients import (
    CoefficientField,
    CoefficientMode,
    VariableSet,
    average_blocks_halfnodes,
    average_coefficient_halfnodes,
    build_system_blocks,
    scalar_coefficient,
)
from sbpdiss.core.dissipation.properties import (
    conservation_check,
    dissipativity_check,
    random_coefficient,
    random_euler_states,
    se_rank_checks,
    symmetry_check,
)
from sbpdiss.core.dissipation.undivided import (
    BoundaryCorrection,
    UndividedDiff,
    build_boundary_correction,
    build_undivided_diff,
)

__all__ = [
    "BoundaryCorrection",
    "CoefficientField",
    "CoefficientMode",
    "DissipationOperator",
    "UndividedDiff",
    "VariableSet",
    "apply_dissipation_2d",
    "assemble_scalar_dissipation",
    "average_blocks_halfnodes",
    "average_coefficient_halfnodes",
    "build_boundary_correction",
    "build_dissipation",
    "build_system_blocks",
    "build_undivided_diff",
    "conservation_check",
    "dissipativity_check",
    "random_coefficient",
    "random_euler_states",
    "scalar_coefficient",
    "se_rank_checks",
    "symmetry_check",
]
