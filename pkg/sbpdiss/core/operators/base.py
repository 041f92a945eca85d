"""Operator data types and their invariant checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from sbpdiss._compat import StrEnum

import numpy as np

from sbpdiss.core.exceptions import ClosureError

SBP_TOL = 1e-12
ACCURACY_TOL = 1e-10
QUADRATURE_TOL = 1e-10


class Family(StrEnum):
    CSBP = "CSBP"
    LGL = "LGL"
    LG = "LG"
    # uniform 5-node distribution of the printed upwind block; internal only
    UFD = "UFD"

    @property
    def is_spectral(self) -> bool:
        return self in (Family.LGL, Family.LG)


def frozen_array(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class NodalDistribution:
    """Nodes on the undivided reference domain [0, N-1]."""

    family: Family
    p: int
    n: int
    nodes: np.ndarray
    reference_nodes: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozen_array(self.nodes))
        if self.reference_nodes is not None:
            object.__setattr__(self, "reference_nodes", frozen_array(self.reference_nodes))

    @property
    def quadrature_degree(self) -> int:
        """Highest monomial degree the associated diagonal norm integrates exactly."""
        if self.family is Family.LG:
            return 2 * self.p + 1
        return 2 * self.p - 1


@dataclass(frozen=True)
class SbpOperator:
    """Diagonal-norm SBP first-derivative operator on one block.

    Physical coordinates are ``x = x0 + element_size * x~`` with ``x~`` the
    undivided nodes, so ``element_size`` is the node spacing for FD blocks.
    """

    dist: NodalDistribution
    h: np.ndarray
    D: np.ndarray
    Q: np.ndarray
    E: np.ndarray
    e_left: np.ndarray
    e_right: np.ndarray
    element_size: float
    metadata: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for name in ("h", "D", "Q", "E", "e_left", "e_right"):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))

    @property
    def n(self) -> int:
        return self.dist.n

    @property
    def H(self) -> np.ndarray:
        return np.diag(self.h)

    @property
    def h_inv(self) -> np.ndarray:
        return 1.0 / self.h

    @property
    def undivided_h(self) -> np.ndarray:
        return self.h / self.element_size

    @property
    def length(self) -> float:
        return self.element_size * (self.n - 1)

    @property
    def diagonal_boundary(self) -> bool:
        """True when the boundary matrix is diag(-1, 0, ..., 0, 1)."""
        return self.dist.family is not Family.LG

    def physical_nodes(self, x0: float = 0.0) -> np.ndarray:
        return x0 + self.element_size * self.dist.nodes


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    residual: float
    tolerance: float
    skip_reason: str | None = None

    @classmethod
    def skipped(cls, name: str, reason: str) -> InvariantCheck:
        return cls(name, float("nan"), float("nan"), skip_reason=reason)

    @property
    def passed(self) -> bool:
        if self.skip_reason is not None:
            return True
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


def check_sbp_operator(op: SbpOperator) -> list[InvariantCheck]:
    """Evaluate the SBP, accuracy, positivity and quadrature invariants."""
    label = f"{op.dist.family}-p{op.dist.p}-N{op.n}"
    checks: list[InvariantCheck] = []

    q_scale = float(np.max(np.abs(op.Q)))
    sbp_residual = float(np.max(np.abs(op.Q + op.Q.T - op.E)))
    checks.append(InvariantCheck(f"{label}:sbp", sbp_residual, SBP_TOL * q_scale))

    # accuracy is measured on the undivided grid so the tolerance is scale free
    x = op.dist.nodes
    d_undivided = op.D * op.element_size
    accuracy_residual = 0.0
    for k in range(op.dist.p + 1):
        lhs = d_undivided @ x**k
        rhs = k * x ** (k - 1) if k > 0 else np.zeros_like(x)
        scale = max(1.0, float(np.max(np.abs(x ** max(k - 1, 0)))))
        accuracy_residual = max(accuracy_residual, float(np.max(np.abs(lhs - rhs))) / scale)
    checks.append(InvariantCheck(f"{label}:accuracy", accuracy_residual, ACCURACY_TOL))

    positivity = 0.0 if np.min(op.h) > 0.0 else float("inf")
    checks.append(InvariantCheck(f"{label}:positive-norm", positivity, 0.0))

    length_residual = abs(float(np.sum(op.h)) - op.length) / op.length
    checks.append(InvariantCheck(f"{label}:norm-length", length_residual, SBP_TOL * op.n))

    h_undivided = op.undivided_h
    upper = op.n - 1.0
    quadrature_residual = 0.0
    for k in range(op.dist.quadrature_degree + 1):
        exact = upper ** (k + 1) / (k + 1)
        quadrature_residual = max(quadrature_residual, abs(float(h_undivided @ x**k) - exact) / exact)
    checks.append(InvariantCheck(f"{label}:quadrature", quadrature_residual, QUADRATURE_TOL))
    return checks


def ensure_valid(op: SbpOperator) -> SbpOperator:
    failed = [check for check in check_sbp_operator(op) if not check.passed]
    if failed:
        details = ", ".join(f"{c.name}={c.residual:.3e} (tol {c.tolerance:.1e})" for c in failed)
        raise ClosureError(f"Operator failed its invariants: {details}")
    return op

