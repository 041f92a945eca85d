"""Common machinery of the semi-discretizations du/dt = R(u).

Volume terms and SATs are built on a *line layout*: an array of shape
``(K, N, ...)`` whose first axis runs over the blocks of one periodic chain
and whose second axis runs over the nodes of each block. 2D schemes move
each direction into this layout in turn.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from sbpdiss._compat import StrEnum
from typing import Any, Callable

import numpy as np

from sbpdiss.core.dissipation import DissipationOperator
from sbpdiss.core.exceptions import UnsupportedFamily
from sbpdiss.core.logger import Logger, get_logger
from sbpdiss.core.operators import SbpOperator

PAIR_TOL = 1e-14

TwoPointFlux = Callable[[np.ndarray, np.ndarray], np.ndarray]


class Scheme(StrEnum):
    CENTRAL = "Central"
    SPLIT_FORM_BURGERS = "SplitFormBurgers"
    HADAMARD_ENTROPY_STABLE = "HadamardEntropyStable"
    UPWIND_FVS = "UpwindFVS"


class SatKind(StrEnum):
    SYMMETRIC = "Symmetric"
    LAX_FRIEDRICHS = "LaxFriedrichs"
    RUSANOV = "Rusanov"
    ROE_MATRIX = "RoeMatrix"
    ENTROPY_DISSIPATIVE_MATRIX = "EntropyDissipativeMatrix"


@dataclass(frozen=True)
class Functionals:
    energy: float
    entropy: float
    totals: tuple[float, ...]

    def as_dict(self) -> dict[str, float]:
        row = {"energy": self.energy, "entropy": self.entropy}
        row.update({f"total_{k}": value for k, value in enumerate(self.totals)})
        return row


@dataclass(frozen=True)
class SkewPairs:
    """Nonzero upper-triangle entries of S = Q - E/2 with node incidence matrices."""

    first: np.ndarray
    second: np.ndarray
    values: np.ndarray
    incidence_first: np.ndarray
    incidence_second: np.ndarray

    @classmethod
    def from_operator(cls, op: SbpOperator) -> SkewPairs:
        skew = op.Q - 0.5 * op.E
        first, second = np.nonzero(np.triu(np.abs(skew) > PAIR_TOL * np.max(np.abs(skew)), k=1))
        n, count = op.n, len(first)
        incidence_first = np.zeros((n, count))
        incidence_second = np.zeros((n, count))
        incidence_first[first, np.arange(count)] = 1.0
        incidence_second[second, np.arange(count)] = 1.0
        return cls(first, second, skew[first, second], incidence_first, incidence_second)


def require_diagonal_boundary(op: SbpOperator, scheme: str) -> None:
    if not op.diagonal_boundary:
        raise UnsupportedFamily(f"{scheme} needs boundary nodes; {op.dist.family} is only supported for linear convection")


def node_scale(h: np.ndarray, ndim: int) -> np.ndarray:
    """Reshape per-node weights to divide a line-layout array of ``ndim`` axes."""
    return h.reshape((1, -1) + (1,) * (ndim - 2))


def hadamard_volume(v: np.ndarray, pairs: SkewPairs, two_point: TwoPointFlux) -> np.ndarray:
    """-(2 S o F*) 1 in line layout, without the H^-1 factor."""
    flux = two_point(v[:, pairs.first], v[:, pairs.second])
    weights = 2.0 * pairs.values.reshape((1, -1) + (1,) * (flux.ndim - 2))
    contribution = weights * flux
    return (
        np.einsum("ip,kp...->ki...", pairs.incidence_second, contribution)
        - np.einsum("ip,kp...->ki...", pairs.incidence_first, contribution)
    )


def apply_matrix(matrix: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Apply an N x N operator along the node axis of a line-layout array."""
    return np.einsum("ij,kj...->ki...", matrix, v)


def boundary_values(op: SbpOperator, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.einsum("j,kj...->k...", op.e_left, v), np.einsum("j,kj...->k...", op.e_right, v)


def interface_fluxes(left: np.ndarray, right: np.ndarray, numerical_flux: TwoPointFlux) -> np.ndarray:
    """f* at the right end of every block of a periodic chain."""
    return numerical_flux(right, np.roll(left, -1, axis=0))


def sat_terms(
        op: SbpOperator,
        flux_left: np.ndarray,
        flux_right: np.ndarray,
        f_star: np.ndarray,
) -> np.ndarray:
    """e_R (e_R^T f - f*_R) - e_L (e_L^T f - f*_L), without the H^-1 factor."""
    right = np.einsum("j,k...->kj...", op.e_right, flux_right - f_star)
    left = np.einsum("j,k...->kj...", op.e_left, flux_left - np.roll(f_star, 1, axis=0))
    return right - left


class SemiDiscretization(ABC):
    """A PDE on a periodic grid with a scheme, interface SATs and optional volume dissipation."""

    pde_code: str = ""

    def __init__(
            self,
            grid: Any,
            scheme: Scheme,
            sat: SatKind,
            dissipation: DissipationOperator | None = None,
            logger: Logger | None = None,
    ) -> None:
        self.grid = grid
        self.scheme = Scheme(scheme)
        self.sat = SatKind(sat)
        self.dissipation = dissipation
        self.logger = logger or get_logger(self.__class__.__name__)

    @property
    @abstractmethod
    def state_shape(self) -> tuple[int, ...]:
        pass

    @abstractmethod
    def rhs(self, u: np.ndarray, t: float = 0.0) -> np.ndarray:
        """du/dt; generic over real and complex states."""

    @abstractmethod
    def dissipation_rhs(self, u: np.ndarray) -> np.ndarray:
        """The volume-dissipation contribution to du/dt alone."""

    @abstractmethod
    def max_wave_speed(self, u: np.ndarray) -> float:
        pass

    def __call__(self, u: np.ndarray, t: float = 0.0) -> np.ndarray:
        return self.rhs(u, t)

    @property
    def size(self) -> int:
        return int(np.prod(self.state_shape))

    def check_state(self, u: np.ndarray) -> None:
        """Raise NonAdmissibleState for unphysical states; scalar PDEs accept anything."""

    def entropy_density(self, u: np.ndarray) -> np.ndarray:
        return 0.5 * u * u

    def entropy_variables(self, u: np.ndarray) -> np.ndarray:
        return u

    def evaluate_functionals(self, u: np.ndarray) -> Functionals:
        u = np.real(u)
        squares = u * u
        if squares.ndim > len(self.grid.shape):
            squares = np.sum(squares, axis=-1)
        totals = np.atleast_1d(self.grid.integrate(u))
        return Functionals(
            energy=float(self.grid.integrate(squares)),
            entropy=float(self.grid.integrate(self.entropy_density(u))),
            totals=tuple(float(value) for value in totals),
        )

    def stable_time_step(self, u: np.ndarray, cfl: float) -> float:
        return cfl * self.grid.min_spacing / self.max_wave_speed(u)


def assemble_linear_operator(semidisc: SemiDiscretization) -> np.ndarray:
    """Matrix of a linear R, column by column."""
    size = semidisc.size
    matrix = np.empty((size, size))
    basis = np.zeros(size)
    for j in range(size):
        basis[j] = 1.0
        matrix[:, j] = semidisc.rhs(basis.reshape(semidisc.state_shape)).ravel()
        basis[j] = 0.0
    return matrix
