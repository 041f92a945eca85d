"""SBP operator construction."""

from __future__ import annotations

from typing import Callable

from sbpdiss.core.exceptions import OperatorError, UnsupportedFamily
from sbpdiss.core.operators.base import (
    Family,
    InvariantCheck,
    NodalDistribution,
    SbpOperator,
    check_sbp_operator,
)
from sbpdiss.core.operators.csbp import build_csbp_operator
from sbpdiss.core.operators.nodes import build_nodal_distribution, minimum_csbp_nodes
from sbpdiss.core.operators.spectral import build_spectral_operator
from sbpdiss.core.operators.upwind import UpwindOperator, build_upwind_pu2_block

OperatorBuilder = Callable[[NodalDistribution, float], SbpOperator]

BUILDERS: dict[Family, OperatorBuilder] = {
    Family.CSBP: build_csbp_operator,
    Family.LGL: build_spectral_operator,
    Family.LG: build_spectral_operator,
}


def build_sbp_operator(dist: NodalDistribution, element_size: float) -> SbpOperator:
    """Build and verify the SBP operator for ``dist`` with node spacing ``element_size``."""
    builder = BUILDERS.get(dist.family)
    if builder is None:
        raise UnsupportedFamily(
            f"Unknown operator family: {dist.family}. "
            f"Available: {[family.value for family in BUILDERS]}"
        )
    if element_size <= 0.0:
        raise OperatorError(f"Element size must be positive, got {element_size}")
    return builder(dist, element_size)


def build_block_operator(family: Family | str, p: int, n: int | None, length: float) -> SbpOperator:
    """Operator for one block of physical ``length``."""
    dist = build_nodal_distribution(family, p, n)
    return build_sbp_operator(dist, length / (dist.n - 1))


__all__ = [
    "BUILDERS",
    "Family",
    "InvariantCheck",
    "NodalDistribution",
    "SbpOperator",
    "UpwindOperator",
    "build_block_operator",
    "build_nodal_distribution",
    "build_sbp_operator",
    "build_upwind_pu2_block",
    "check_sbp_operator",
    "minimum_csbp_nodes",
]
