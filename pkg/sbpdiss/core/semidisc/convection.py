"""Linear convection u_t + a u_x = 0 on a periodic chain of blocks."""

from __future__ import annotations

import numpy as np

from sbpdiss.core.dissipation import DissipationOperator
from sbpdiss.core.exceptions import OperatorError
from sbpdiss.core.logger import Logger
from sbpdiss.core.physics.scalar import linear_flux, linear_upwind_dissipation
from sbpdiss.core.semidisc.base import (
    SatKind,
    Scheme,
    SemiDiscretization,
    apply_matrix,
    boundary_values,
    interface_fluxes,
    sat_terms,
)
from sbpdiss.core.semidisc.grid import PeriodicGrid1D


class LinearConvection1D(SemiDiscretization):
    pde_code = "linear-convection"

    def __init__(
            self,
            grid: PeriodicGrid1D,
            sat: SatKind = SatKind.LAX_FRIEDRICHS,
            dissipation: DissipationOperator | None = None,
            wave_speed: float = 1.0,
            logger: Logger | None = None,
    ) -> None:
        super().__init__(grid, Scheme.CENTRAL, sat, dissipation, logger)
        if self.sat not in (SatKind.SYMMETRIC, SatKind.LAX_FRIEDRICHS):
            raise OperatorError(f"Linear convection supports Symmetric or LaxFriedrichs SATs, got {self.sat}")
        self.wave_speed = wave_speed
        self.op = grid.op

    @property
    def state_shape(self) -> tuple[int, int]:
        return self.grid.shape

    def _numerical_flux(self, u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
        a = self.wave_speed
        central = 0.5 * a * (u_left + u_right)
        if self.sat is SatKind.LAX_FRIEDRICHS:
            return central - linear_upwind_dissipation(u_left, u_right, a)
        return central

    def rhs(self, u: np.ndarray, t: float = 0.0) -> np.ndarray:
        a = self.wave_speed
        volume = -a * apply_matrix(self.op.Q, u)
        left, right = boundary_values(self.op, u)
        f_star = interface_fluxes(left, right, self._numerical_flux)
        sat = sat_terms(self.op, linear_flux(left, a), linear_flux(right, a), f_star)
        return (volume + sat) / self.op.h + self.dissipation_rhs(u)

    def dissipation_rhs(self, u: np.ndarray) -> np.ndarray:
        if self.dissipation is None:
            return np.zeros_like(u, dtype=np.result_type(float, u))
        return self.dissipation.apply(u)

    def max_wave_speed(self, u: np.ndarray) -> float:
        return abs(self.wave_speed)
