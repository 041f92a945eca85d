"""Compressible Euler equations on a periodic chain of blocks."""

from __future__ import annotations

from functools import partial
from typing import Callable

import numpy as np

from sbpdiss.core.dissipation import DissipationOperator, VariableSet, build_system_blocks
from sbpdiss.core.exceptions import DissipationError, OperatorError
from sbpdiss.core.logger import Logger
from sbpdiss.core.operators import SbpOperator
from sbpdiss.core.operators.upwind import UpwindOperator
from sbpdiss.core.physics import euler
from sbpdiss.core.physics.fluxes import (
    central_flux,
    chandrashekar_flux,
    entropy_matrix_dissipation,
    ranocha_flux_2d,
    roe_matrix_dissipation,
    rusanov_dissipation,
)
from sbpdiss.core.physics.splitting import drikakis_tsangaris, steger_warming
from sbpdiss.core.semidisc.base import (
    SatKind,
    Scheme,
    SemiDiscretization,
    SkewPairs,
    apply_matrix,
    hadamard_volume,
    interface_fluxes,
    require_diagonal_boundary,
    sat_terms,
)
from sbpdiss.core.semidisc.grid import PeriodicGrid1D

TWO_POINT_FLUXES: dict[str, Callable[..., np.ndarray]] = {
    "chandrashekar": chandrashekar_flux,
    "ranocha": ranocha_flux_2d,
}

SPLITTINGS: dict[str, Callable[..., tuple[np.ndarray, np.ndarray]]] = {
    "steger-warming": steger_warming,
    "drikakis-tsangaris": drikakis_tsangaris,
}

INTERFACE_DISSIPATION: dict[SatKind, Callable[..., np.ndarray] | None] = {
    SatKind.SYMMETRIC: None,
    SatKind.LAX_FRIEDRICHS: rusanov_dissipation,
    SatKind.RUSANOV: rusanov_dissipation,
    SatKind.ROE_MATRIX: roe_matrix_dissipation,
    SatKind.ENTROPY_DISSIPATIVE_MATRIX: entropy_matrix_dissipation,
}


def _lookup(registry: dict, key: str, what: str):
    try:
        return registry[key]
    except KeyError as exc:
        raise OperatorError(f"Unknown {what}: {key}. Available: {list(registry)}") from exc


class EulerLineKernel:
    """Volume and interface terms of one direction, H-weighted, in line layout."""

    def __init__(
            self,
            op: SbpOperator,
            scheme: Scheme,
            sat: SatKind,
            direction: int,
            gamma: float,
            two_point: str = "chandrashekar",
            splitting: str = "steger-warming",
            upwind: UpwindOperator | None = None,
    ) -> None:
        require_diagonal_boundary(op, "Euler")
        self.op = op
        self.scheme = scheme
        self.direction = direction
        self.gamma = gamma
        self.flux = partial(euler.flux, direction=direction, gamma=gamma)

        interface_dissipation = _lookup(INTERFACE_DISSIPATION, sat, "interface dissipation")
        if scheme is Scheme.HADAMARD_ENTROPY_STABLE:
            self.pairs = SkewPairs.from_operator(op)
            self.two_point = partial(_lookup(TWO_POINT_FLUXES, two_point, "two-point flux"), direction=direction, gamma=gamma)
            symmetric = self.two_point
        elif scheme is Scheme.UPWIND_FVS:
            if upwind is None:
                raise OperatorError("UpwindFVS needs a grid built from the upwind block")
            self.splitting = partial(_lookup(SPLITTINGS, splitting, "flux splitting"), direction=direction, gamma=gamma)
            self.q_plus = upwind.h[:, None] * upwind.d_plus
            self.q_minus = upwind.h[:, None] * upwind.d_minus
            symmetric = partial(central_flux, direction=direction, gamma=gamma)
        elif scheme is Scheme.CENTRAL:
            symmetric = partial(central_flux, direction=direction, gamma=gamma)
        else:
            raise OperatorError(f"Euler supports Central, HadamardEntropyStable or UpwindFVS, got {scheme}")

        if interface_dissipation is None:
            self.numerical_flux = symmetric
        else:
            dissipation = partial(interface_dissipation, direction=direction, gamma=gamma)
            self.numerical_flux = lambda left, right: symmetric(left, right) - dissipation(left, right)

    def volume(self, v: np.ndarray) -> np.ndarray:
        if self.scheme is Scheme.HADAMARD_ENTROPY_STABLE:
            out = hadamard_volume(v, self.pairs, self.two_point)
            # -(E o F*) 1 with diagonal E
            out[:, 0] += self.flux(v[:, 0])
            out[:, -1] -= self.flux(v[:, -1])
            return out
        if self.scheme is Scheme.UPWIND_FVS:
            f_plus, f_minus = self.splitting(v)
            return -apply_matrix(self.q_plus, f_minus) - apply_matrix(self.q_minus, f_plus)
        return -apply_matrix(self.op.Q, self.flux(v))

    def residual(self, v: np.ndarray) -> np.ndarray:
        left, right = v[:, 0], v[:, -1]
        f_star = interface_fluxes(left, right, self.numerical_flux)
        return self.volume(v) + sat_terms(self.op, self.flux(left), self.flux(right), f_star)


class EulerSemiDiscretization(SemiDiscretization):
    """Shared Euler behaviour: admissibility, entropy and dissipation variables."""

    def __init__(
            self,
            grid,
            scheme: Scheme,
            sat: SatKind,
            dissipation: DissipationOperator | None,
            gamma: float,
            logger: Logger | None,
    ) -> None:
        super().__init__(grid, scheme, sat, dissipation, logger)
        self.gamma = gamma
        if dissipation is not None and not dissipation.mode.is_system:
            raise DissipationError(f"Euler dissipation needs a system coefficient mode, got {dissipation.mode}")

    def check_state(self, u: np.ndarray) -> None:
        euler.check_admissible(u, self.gamma)

    def entropy_density(self, u: np.ndarray) -> np.ndarray:
        return euler.entropy_function(u, self.gamma)

    def entropy_variables(self, u: np.ndarray) -> np.ndarray:
        return euler.entropy_variables(u, self.gamma)

    def dissipation_variables(self, u: np.ndarray) -> np.ndarray:
        if self.dissipation.variables is VariableSet.ENTROPY:
            return self.entropy_variables(u)
        return u

    def max_wave_speed(self, u: np.ndarray) -> float:
        return float(np.max(np.real(euler.max_wave_speed(np.real(u), None, self.gamma))))


class Euler1D(EulerSemiDiscretization):
    pde_code = "euler-1d"

    def __init__(
            self,
            grid: PeriodicGrid1D,
            scheme: Scheme = Scheme.HADAMARD_ENTROPY_STABLE,
            sat: SatKind = SatKind.ENTROPY_DISSIPATIVE_MATRIX,
            dissipation: DissipationOperator | None = None,
            gamma: float = euler.GAMMA,
            two_point: str = "chandrashekar",
            splitting: str = "steger-warming",
            logger: Logger | None = None,
    ) -> None:
        super().__init__(grid, scheme, sat, dissipation, gamma, logger)
        self.op = grid.op
        self.kernel = EulerLineKernel(grid.op, self.scheme, self.sat, 0, gamma, two_point, splitting, grid.upwind)

    @property
    def state_shape(self) -> tuple[int, int, int]:
        return self.grid.shape + (3,)

    def rhs(self, u: np.ndarray, t: float = 0.0) -> np.ndarray:
        self.check_state(u)
        return self.kernel.residual(u) / self.op.h[:, None] + self.dissipation_rhs(u)

    def dissipation_rhs(self, u: np.ndarray) -> np.ndarray:
        if self.dissipation is None or self.dissipation.eps == 0.0:
            return np.zeros_like(u, dtype=np.result_type(float, u))
        coefficient = build_system_blocks(u, self.dissipation.mode, self.dissipation.half_nodes, 0, self.gamma)
        return self.dissipation.apply(self.dissipation_variables(u), coefficient)
