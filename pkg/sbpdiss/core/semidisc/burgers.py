"""Inviscid Burgers u_t + (u^2/2)_x = 0: split form and upwind flux-vector splitting."""

from __future__ import annotations

import numpy as np

from sbpdiss.core.dissipation import DissipationOperator, scalar_coefficient
from sbpdiss.core.exceptions import OperatorError
from sbpdiss.core.logger import Logger
from sbpdiss.core.operators.upwind import UpwindOperator
from sbpdiss.core.physics.analytic import cabs
from sbpdiss.core.physics.scalar import (
    burgers_ec_flux,
    burgers_flux,
    burgers_flux_split,
    burgers_rusanov_dissipation,
)
from sbpdiss.core.semidisc.base import (
    SatKind,
    Scheme,
    SemiDiscretization,
    apply_matrix,
    boundary_values,
    interface_fluxes,
    require_diagonal_boundary,
    sat_terms,
)
from sbpdiss.core.semidisc.grid import PeriodicGrid1D


class Burgers1D(SemiDiscretization):
    pde_code = "burgers"

    def __init__(
            self,
            grid: PeriodicGrid1D,
            scheme: Scheme = Scheme.SPLIT_FORM_BURGERS,
            sat: SatKind = SatKind.RUSANOV,
            dissipation: DissipationOperator | None = None,
            logger: Logger | None = None,
    ) -> None:
        super().__init__(grid, scheme, sat, dissipation, logger)
        if self.scheme not in (Scheme.SPLIT_FORM_BURGERS, Scheme.UPWIND_FVS):
            raise OperatorError(f"Burgers supports SplitFormBurgers or UpwindFVS, got {self.scheme}")
        if self.sat not in (SatKind.SYMMETRIC, SatKind.RUSANOV):
            raise OperatorError(f"Burgers supports Symmetric or Rusanov SATs, got {self.sat}")
        if self.scheme is Scheme.UPWIND_FVS and grid.upwind is None:
            raise OperatorError("UpwindFVS needs a grid built from the upwind block")
        self.op = grid.op
        require_diagonal_boundary(self.op, "Burgers")
        if self.scheme is Scheme.UPWIND_FVS:
            self._q_plus = grid.upwind.h[:, None] * grid.upwind.d_plus
            self._q_minus = grid.upwind.h[:, None] * grid.upwind.d_minus

    @property
    def state_shape(self) -> tuple[int, int]:
        return self.grid.shape

    def _numerical_flux(self, u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
        if self.scheme is Scheme.SPLIT_FORM_BURGERS:
            symmetric = burgers_ec_flux(u_left, u_right)
        else:
            symmetric = 0.5 * (burgers_flux(u_left) + burgers_flux(u_right))
        if self.sat is SatKind.RUSANOV:
            return symmetric - burgers_rusanov_dissipation(u_left, u_right)
        return symmetric

    def volume(self, u: np.ndarray) -> np.ndarray:
        """H-weighted volume term."""
        if self.scheme is Scheme.SPLIT_FORM_BURGERS:
            return -(apply_matrix(self.op.Q, u * u) + u * apply_matrix(self.op.Q, u)) / 3.0
        f_plus, f_minus = burgers_flux_split(u)
        return -apply_matrix(self._q_plus, f_minus) - apply_matrix(self._q_minus, f_plus)

    def rhs(self, u: np.ndarray, t: float = 0.0) -> np.ndarray:
        left, right = boundary_values(self.op, u)
        f_star = interface_fluxes(left, right, self._numerical_flux)
        sat = sat_terms(self.op, burgers_flux(left), burgers_flux(right), f_star)
        return (self.volume(u) + sat) / self.op.h + self.dissipation_rhs(u)

    def dissipation_rhs(self, u: np.ndarray) -> np.ndarray:
        if self.dissipation is None:
            return np.zeros_like(u, dtype=np.result_type(float, u))
        coefficient = scalar_coefficient(cabs(u), half_nodes=self.dissipation.half_nodes)
        return self.dissipation.apply(u, coefficient)

    def max_wave_speed(self, u: np.ndarray) -> float:
        return float(np.max(np.abs(np.real(u))))


def upwind_dissipation_energy(upwind: UpwindOperator, u: np.ndarray) -> float:
    """u^T H A_D u for the dissipation hidden in Burgers flux-vector splitting.

    With f+- = (u^2/2 +- |u|u)/2 the split volume term equals the central one
    plus H^-1 (-S diag(|u|)) u, which is not negative semi-definite.
    """
    u = np.asarray(u, dtype=float)
    return -float(u @ upwind.S @ (np.abs(u) * u))
