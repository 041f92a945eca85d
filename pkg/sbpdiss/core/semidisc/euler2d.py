"""Compressible Euler equations on a periodic K x K lattice of tensor-product blocks."""

from __future__ import annotations

import numpy as np

from sbpdiss.core.dissipation import DissipationOperator, apply_dissipation_2d, build_system_blocks
from sbpdiss.core.logger import Logger
from sbpdiss.core.physics import euler
from sbpdiss.core.semidisc.base import SatKind, Scheme, node_scale
from sbpdiss.core.semidisc.euler1d import EulerLineKernel, EulerSemiDiscretization
from sbpdiss.core.semidisc.grid import PeriodicGrid2D


class Euler2D(EulerSemiDiscretization):
    pde_code = "euler-2d"

    def __init__(
            self,
            grid: PeriodicGrid2D,
            scheme: Scheme = Scheme.HADAMARD_ENTROPY_STABLE,
            sat: SatKind = SatKind.ENTROPY_DISSIPATIVE_MATRIX,
            dissipation: DissipationOperator | None = None,
            gamma: float = euler.GAMMA,
            two_point: str = "ranocha",
            splitting: str = "drikakis-tsangaris",
            logger: Logger | None = None,
    ) -> None:
        super().__init__(grid, scheme, sat, dissipation, gamma, logger)
        self.op = grid.op
        self.kernels = tuple(
            EulerLineKernel(grid.op, self.scheme, self.sat, direction, gamma, two_point, splitting, grid.upwind)
            for direction in (0, 1)
        )

    @property
    def state_shape(self) -> tuple[int, ...]:
        return self.grid.shape + (4,)

    def rhs(self, u: np.ndarray, t: float = 0.0) -> np.ndarray:
        self.check_state(u)
        out = np.zeros_like(u, dtype=np.result_type(float, u))
        for direction, kernel in enumerate(self.kernels):
            # blocks and nodes of this direction to the front: (K, N, K', N', 4)
            lines = np.moveaxis(u, (direction, 2 + direction), (0, 1))
            residual = kernel.residual(lines) / node_scale(self.op.h, lines.ndim)
            out += np.moveaxis(residual, (0, 1), (direction, 2 + direction)) / self.grid.jacobian
        return out + self.dissipation_rhs(u)

    def dissipation_rhs(self, u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(u, dtype=np.result_type(float, u))
        if self.dissipation is None or self.dissipation.eps == 0.0:
            return out
        q = self.dissipation_variables(u)
        for direction in (0, 1):
            coefficient = build_system_blocks(
                u,
                self.dissipation.mode,
                self.dissipation.half_nodes,
                direction,
                self.gamma,
                axis=-3 + direction,
            )
            out += apply_dissipation_2d(direction, self.op, self.op, self.dissipation, self.grid.jacobian, q, coefficient)
        return out
