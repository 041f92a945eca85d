"""Variable coefficients A of the dissipation operator.

Scalar coefficients are arrays of shape ``(..., N)``. Blocks for systems are
arrays of shape ``(..., N, n, n)``. ``ScalarBlock`` stores only its scalar
``lambda_max`` per node since the block is ``lambda_max * I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from sbpdiss._compat import StrEnum

import numpy as np

from sbpdiss.core.exceptions import NegativeCoefficient
from sbpdiss.core.operators.base import InvariantCheck
from sbpdiss.core.physics import euler

SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10


class VariableSet(StrEnum):
    CONSERVATIVE = "conservative"
    ENTROPY = "entropy"


class CoefficientMode(StrEnum):
    NODAL_SCALAR = "NodalScalar"
    HALF_NODE_SCALAR = "HalfNodeScalar"
    SCALAR_BLOCK = "ScalarBlock"
    MATRIX_BLOCK = "MatrixBlock"
    SCALAR_MATRIX_BLOCK = "ScalarMatrixBlock"
    MATRIX_MATRIX_BLOCK = "MatrixMatrixBlock"

    @property
    def is_system(self) -> bool:
        return self not in (CoefficientMode.NODAL_SCALAR, CoefficientMode.HALF_NODE_SCALAR)

    @property
    def stores_scalar(self) -> bool:
        return self in (CoefficientMode.NODAL_SCALAR, CoefficientMode.HALF_NODE_SCALAR, CoefficientMode.SCALAR_BLOCK)

    @property
    def variables(self) -> VariableSet:
        if self in (CoefficientMode.SCALAR_MATRIX_BLOCK, CoefficientMode.MATRIX_MATRIX_BLOCK):
            return VariableSet.ENTROPY
        return VariableSet.CONSERVATIVE

    @property
    def symmetric(self) -> bool:
        """X |Lambda| X^-1 is not symmetric, so MatrixBlock carries no PSD guarantee."""
        return self is not CoefficientMode.MATRIX_BLOCK


@dataclass(frozen=True)
class CoefficientField:
    mode: CoefficientMode
    values: np.ndarray
    half_nodes: bool = False

    @property
    def n(self) -> int:
        return self.values.shape[-1] if self.mode.stores_scalar else self.values.shape[-3]

    def as_blocks(self, components: int) -> np.ndarray:
        if self.mode.stores_scalar:
            return self.values[..., None, None] * np.eye(components)
        return self.values

    def checks(self) -> list[InvariantCheck]:
        label = f"coefficient:{self.mode}"
        if self.mode.stores_scalar:
            negative = float(max(0.0, -np.min(np.real(self.values))))
            return [InvariantCheck(f"{label}:non-negative", negative, 0.0)]
        blocks = np.real(self.values)
        scale = max(float(np.max(np.abs(blocks))), np.finfo(float).tiny)
        checks = []
        if self.mode.symmetric:
            asymmetry = float(np.max(np.abs(blocks - np.swapaxes(blocks, -1, -2))))
            checks.append(InvariantCheck(f"{label}:symmetric", asymmetry / scale, SYMMETRY_TOL))
            smallest = float(np.min(np.linalg.eigvalsh(0.5 * (blocks + np.swapaxes(blocks, -1, -2)))))
            checks.append(InvariantCheck(f"{label}:psd", max(0.0, -smallest) / scale, PSD_TOL))
        return checks


def _halfnode_mean(values: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(values, axis, -1)
    out = np.zeros_like(moved, dtype=np.result_type(float, moved))
    out[..., 1:] = 0.5 * (moved[..., :-1] + moved[..., 1:])
    return np.moveaxis(out, -1, axis)


def average_coefficient_halfnodes(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """(0, (a_1 + a_2)/2, ..., (a_{N-1} + a_N)/2) along ``axis``."""
    a = np.asarray(a)
    if np.any(np.real(a) < 0.0):
        raise NegativeCoefficient(f"Dissipation coefficients must be non-negative, min {np.min(np.real(a)):.6g}")
    return _halfnode_mean(a, axis)


def average_blocks_halfnodes(blocks: np.ndarray, axis: int = -3) -> np.ndarray:
    """Arithmetic mean of adjacent blocks with a leading zero block; PSD is preserved."""
    return _halfnode_mean(blocks, axis)


def scalar_coefficient(a: np.ndarray, half_nodes: bool = False) -> CoefficientField:
    a = np.asarray(a)
    if half_nodes:
        return CoefficientField(CoefficientMode.HALF_NODE_SCALAR, average_coefficient_halfnodes(a), half_nodes=True)
    if np.any(np.real(a) < 0.0):
        raise NegativeCoefficient(f"Dissipation coefficients must be non-negative, min {np.min(np.real(a)):.6g}")
    return CoefficientField(CoefficientMode.NODAL_SCALAR, a)


def build_system_blocks(
        u: np.ndarray,
        mode: CoefficientMode | str,
        half_nodes: bool = False,
        direction: int = 0,
        gamma: float = euler.GAMMA,
        axis: int = -2,
) -> CoefficientField:
    """Per-node dissipation blocks of the Euler equations.

    ``axis`` (negative) is the node axis of ``u`` along which half-node
    averaging happens; ``direction`` selects the flux direction.
    """
    mode = CoefficientMode(mode)
    if axis >= -1:
        raise ValueError(f"Node axis must be negative and precede the component axis, got {axis}")
    euler.check_admissible(u, gamma)
    if mode is CoefficientMode.SCALAR_BLOCK:
        values = euler.max_wave_speed(u, direction, gamma)
        if half_nodes:
            values = average_coefficient_halfnodes(values, axis + 1)
        return CoefficientField(mode, values, half_nodes=half_nodes)

    if mode is CoefficientMode.SCALAR_MATRIX_BLOCK:
        blocks = euler.max_wave_speed(u, direction, gamma)[..., None, None] * euler.dudw(u, gamma)
    elif mode is CoefficientMode.MATRIX_BLOCK:
        blocks = euler.absolute_jacobian(euler.eigensystem(u, direction, gamma))
    elif mode is CoefficientMode.MATRIX_MATRIX_BLOCK:
        blocks = euler.symmetrized_absolute_jacobian(euler.eigensystem(u, direction, gamma))
    else:
        raise ValueError(f"{mode} is not a system coefficient mode")
    if half_nodes:
        blocks = average_blocks_halfnodes(blocks, axis - 1)
    return CoefficientField(mode, blocks, half_nodes=half_nodes)
