"""Assembly and application of A_D = -eps H^-1 D~_s^T C D~_s with C = (H~) (B) A."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from sbpdiss.core.dissipation.coefficients import (
    CoefficientField,
    CoefficientMode,
    VariableSet,
    scalar_coefficient,
)
from sbpdiss.core.dissipation.undivided import (
    BoundaryCorrection,
    UndividedDiff,
    build_boundary_correction,
    build_undivided_diff,
)
from sbpdiss.core.exceptions import DimensionMismatch, DissipationError, NegativeCoefficient
from sbpdiss.core.operators.base import SbpOperator


@dataclass(frozen=True)
class DissipationOperator:
    op: SbpOperator
    diff: UndividedDiff
    correction: BoundaryCorrection
    eps: float
    include_B: bool = True
    include_Htilde: bool = False
    mode: CoefficientMode = CoefficientMode.NODAL_SCALAR
    # None means A = I; system modes normally receive their blocks per call
    coefficient: CoefficientField | None = None

    @property
    def s(self) -> int:
        return self.diff.s

    @property
    def n(self) -> int:
        return self.op.n

    @property
    def variables(self) -> VariableSet:
        return self.mode.variables

    @property
    def half_nodes(self) -> bool:
        """Odd s places variable coefficients at half-nodes."""
        return self.s % 2 == 1

    @property
    def row_weights(self) -> np.ndarray:
        """Diagonal of H~ B (either factor optional)."""
        weights = np.ones(self.n)
        if self.include_B:
            weights = weights * self.correction.diagonal
        if self.include_Htilde:
            weights = weights * self.op.undivided_h
        return weights

    def with_coefficient(self, coefficient: CoefficientField | None) -> DissipationOperator:
        if coefficient is not None and coefficient.n != self.n:
            raise DimensionMismatch(f"Coefficient has {coefficient.n} nodes, operator has {self.n}")
        return replace(self, coefficient=coefficient)

    def apply(self, q: np.ndarray, coefficient: CoefficientField | None = None) -> np.ndarray:
        """A_D q with nodes on axis -1 (scalar modes) or -2 (system modes, components last)."""
        coefficient = coefficient if coefficient is not None else self.coefficient
        if self.eps == 0.0:
            return np.zeros_like(q, dtype=np.result_type(float, q))
        system = self.mode.is_system
        node_axis = -2 if system else -1
        if q.shape[node_axis] != self.n:
            raise DimensionMismatch(f"State has {q.shape[node_axis]} nodes on axis {node_axis}, operator has {self.n}")

        dt = self.diff.matrix
        weights = self.row_weights
        if system:
            differences = np.einsum("ij,...jk->...ik", dt, q)
            if coefficient is None:
                scaled = weights[:, None] * differences
            elif coefficient.mode.stores_scalar:
                scaled = (weights * coefficient.values)[..., None] * differences
            else:
                scaled = weights[:, None] * np.einsum("...ikl,...il->...ik", coefficient.values, differences)
            back = np.einsum("ji,...jk->...ik", dt, scaled)
            return -self.eps * back / self.op.h[:, None]

        differences = np.einsum("ij,...j->...i", dt, q)
        if coefficient is None:
            scaled = weights * differences
        else:
            scaled = weights * coefficient.values * differences
        back = np.einsum("ji,...j->...i", dt, scaled)
        return -self.eps * back / self.op.h

    def matrix(self, coefficient: CoefficientField | None = None, components: int = 1) -> np.ndarray:
        """Dense A_D; system operators are ordered node-major (index = node * components + component)."""
        coefficient = coefficient if coefficient is not None else self.coefficient
        dt = self.diff.matrix
        n = self.n
        if coefficient is None:
            blocks = np.broadcast_to(np.eye(components), (n, components, components))
        else:
            blocks = coefficient.as_blocks(components)
            if blocks.shape != (n, components, components):
                raise DimensionMismatch(f"Expected coefficient blocks of shape {(n, components, components)}, got {blocks.shape}")
        weighted = self.row_weights[:, None, None] * blocks
        dense = np.einsum("mi,mkl,mj->ikjl", dt, weighted, dt)
        dense = -self.eps * dense / self.op.h[:, None, None, None]
        return dense.reshape(n * components, n * components)


def build_dissipation(
        op: SbpOperator,
        s: int,
        eps: float,
        include_B: bool = True,
        include_Htilde: bool = False,
        mode: CoefficientMode | str = CoefficientMode.NODAL_SCALAR,
        coefficient: CoefficientField | None = None,
) -> DissipationOperator:
    if eps < 0.0:
        raise NegativeCoefficient(f"Dissipation strength must be non-negative, got eps={eps}")
    diff = build_undivided_diff(op.dist, s)
    correction = build_boundary_correction(op.n, diff.s)
    diss = DissipationOperator(
        op=op,
        diff=diff,
        correction=correction,
        eps=eps,
        include_B=include_B,
        include_Htilde=include_Htilde,
        mode=CoefficientMode(mode),
    )
    return diss.with_coefficient(coefficient)


def assemble_scalar_dissipation(
        op: SbpOperator,
        s: int,
        eps: float,
        include_B: bool = True,
        include_Htilde: bool = False,
        coeff: CoefficientField | np.ndarray | None = None,
) -> DissipationOperator:
    """Scalar dissipation; odd s with a variable coefficient needs half-node values."""
    if coeff is not None and not isinstance(coeff, CoefficientField):
        coeff = scalar_coefficient(coeff, half_nodes=s % 2 == 1)
    mode = CoefficientMode.NODAL_SCALAR if coeff is None else coeff.mode
    if mode.is_system:
        raise DissipationError(f"Scalar dissipation needs a scalar coefficient, got {mode}")
    if coeff is not None:
        if coeff.values.shape != (op.n,):
            raise DimensionMismatch(f"Coefficient shape {coeff.values.shape} does not match N={op.n}")
        constant = bool(np.all(coeff.values == coeff.values[0]))
        if s % 2 == 1 and not constant and mode is not CoefficientMode.HALF_NODE_SCALAR:
            raise DissipationError("Odd s with a variable coefficient requires half-node averaging")
    return build_dissipation(op, s, eps, include_B, include_Htilde, mode, coeff)


def _line_layout(array: np.ndarray, axis: int, trailing: int) -> np.ndarray:
    """Move ``axis`` to the node position that DissipationOperator.apply expects."""
    return np.moveaxis(array, axis, array.ndim - 1 - trailing)


def apply_dissipation_2d(
        direction: int,
        op_xi: SbpOperator,
        op_eta: SbpOperator,
        diss: DissipationOperator,
        metric_jacobian: float | np.ndarray,
        q: np.ndarray,
        coefficient: CoefficientField | None = None,
) -> np.ndarray:
    """Tensor-product dissipation along xi (0) or eta (1) of a block.

    ``q`` has nodes on axes (-3, -2) and components last for system modes, or
    on (-2, -1) for scalar modes. The eta (xi) norm cancels against the 2D
    H^-1, leaving the 1D operator along each line scaled by 1/J.
    """
    if direction not in (0, 1):
        raise DimensionMismatch(f"Direction must be 0 (xi) or 1 (eta), got {direction}")
    along = op_xi if direction == 0 else op_eta
    if diss.op is not along and diss.n != along.n:
        raise DimensionMismatch(f"Dissipation operator has {diss.n} nodes, direction {direction} has {along.n}")
    trailing = 1 if diss.mode.is_system else 0
    node_axes = (q.ndim - 2 - trailing, q.ndim - 1 - trailing)
    expected = (op_xi.n, op_eta.n)
    if tuple(q.shape[a] for a in node_axes) != expected:
        raise DimensionMismatch(f"State nodes {tuple(q.shape[a] for a in node_axes)} do not match {expected}")
    jacobian = np.asarray(metric_jacobian, dtype=float)
    if np.any(jacobian <= 0.0):
        raise DissipationError("Metric Jacobian must be positive")
    if jacobian.ndim and trailing:
        jacobian = jacobian[..., None]

    axis = node_axes[direction]
    lines = _line_layout(q, axis, trailing)
    line_coefficient = None
    if coefficient is not None:
        values = coefficient.values
        coefficient_trailing = 0 if coefficient.mode.stores_scalar else 2
        coefficient_axis = values.ndim - 2 - coefficient_trailing + direction
        line_coefficient = replace(coefficient, values=_line_layout(values, coefficient_axis, coefficient_trailing))
    result = diss.apply(lines, line_coefficient)
    return np.moveaxis(result, result.ndim - 1 - trailing, axis) / jacobian
