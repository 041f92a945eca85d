"""Periodic multi-block grids in one and two dimensions.

1D states have shape ``(K, N, ...)``; 2D states have shape ``(K, K, N, N, ...)``
with the block indices first. Computational coordinates coincide with the
physical ones, so the metric Jacobian is 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbpdiss.core.exceptions import OperatorError
from sbpdiss.core.operators import Family, SbpOperator, build_block_operator, build_upwind_pu2_block
from sbpdiss.core.operators.upwind import UpwindOperator


@dataclass(frozen=True)
class PeriodicGrid1D:
    op: SbpOperator
    blocks: int
    x0: float = 0.0
    x1: float = 1.0
    upwind: UpwindOperator | None = None

    def __post_init__(self) -> None:
        if self.blocks < 1:
            raise OperatorError(f"Need at least one block, got {self.blocks}")
        if self.x1 <= self.x0:
            raise OperatorError(f"Empty domain [{self.x0}, {self.x1}]")

    @property
    def length(self) -> float:
        return self.x1 - self.x0

    @property
    def block_length(self) -> float:
        return self.length / self.blocks

    @property
    def n(self) -> int:
        return self.op.n

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocks, self.n

    @property
    def dofs(self) -> int:
        return self.blocks * self.n

    @property
    def nodes(self) -> np.ndarray:
        starts = self.x0 + self.block_length * np.arange(self.blocks)
        return starts[:, None] + self.op.physical_nodes()[None, :]

    @property
    def weights(self) -> np.ndarray:
        return np.broadcast_to(self.op.h, self.shape)

    @property
    def min_spacing(self) -> float:
        return float(np.min(np.diff(self.op.physical_nodes())))

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """1^T H values, summed over blocks and nodes; trailing axes are kept."""
        return np.einsum("kj,kj...->...", self.weights, values)


@dataclass(frozen=True)
class PeriodicGrid2D:
    op: SbpOperator
    blocks: int
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0
    upwind: UpwindOperator | None = None
    jacobian: float = 1.0

    def __post_init__(self) -> None:
        if self.blocks < 1:
            raise OperatorError(f"Need at least one block per direction, got {self.blocks}")
        if not np.isclose(self.x1 - self.x0, self.y1 - self.y0):
            raise OperatorError("Blocks share one operator, so the domain must be square")

    @property
    def block_length(self) -> float:
        return (self.x1 - self.x0) / self.blocks

    @property
    def n(self) -> int:
        return self.op.n

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.blocks, self.blocks, self.n, self.n

    @property
    def dofs(self) -> int:
        return self.blocks**2 * self.n**2

    @property
    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        local = self.op.physical_nodes()
        starts = self.block_length * np.arange(self.blocks)
        x = self.x0 + starts[:, None] + local[None, :]
        y = self.y0 + starts[:, None] + local[None, :]
        xx = np.broadcast_to(x[:, None, :, None], self.shape)
        yy = np.broadcast_to(y[None, :, None, :], self.shape)
        return xx, yy

    @property
    def weights(self) -> np.ndarray:
        return np.broadcast_to(np.outer(self.op.h, self.op.h) * self.jacobian, self.shape)

    @property
    def min_spacing(self) -> float:
        return float(np.min(np.diff(self.op.physical_nodes())))

    def integrate(self, values: np.ndarray) -> np.ndarray:
        return np.einsum("abij,abij...->...", self.weights, values)


def build_grid_1d(family: Family | str, p: int, n: int | None, blocks: int, x0: float, x1: float) -> PeriodicGrid1D:
    block_length = (x1 - x0) / blocks
    return PeriodicGrid1D(op=build_block_operator(family, p, n, block_length), blocks=blocks, x0=x0, x1=x1)


def build_upwind_grid_1d(blocks: int, x0: float, x1: float) -> PeriodicGrid1D:
    """Chain of copies of the 5-node upwind block."""
    upwind = build_upwind_pu2_block().rescaled((x1 - x0) / blocks)
    return PeriodicGrid1D(op=upwind.central_operator(), blocks=blocks, x0=x0, x1=x1, upwind=upwind)


def build_grid_2d(
        family: Family | str,
        p: int,
        n: int | None,
        blocks: int,
        x0: float,
        x1: float,
        y0: float,
        y1: float,
) -> PeriodicGrid2D:
    block_length = (x1 - x0) / blocks
    op = build_block_operator(family, p, n, block_length)
    return PeriodicGrid2D(op=op, blocks=blocks, x0=x0, x1=x1, y0=y0, y1=y1)


def build_upwind_grid_2d(blocks: int, x0: float, x1: float, y0: float, y1: float) -> PeriodicGrid2D:
    upwind = build_upwind_pu2_block().rescaled((x1 - x0) / blocks)
    return PeriodicGrid2D(op=upwind.central_operator(), blocks=blocks, x0=x0, x1=x1, y0=y0, y1=y1, upwind=upwind)
