"""Minimum-width undivided difference operators and the boundary correction B."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
import scipy.linalg

from sbpdiss.core.exceptions import DissipationError, OrderTooHigh, SingularStencil
from sbpdiss.core.logger import get_logger
from sbpdiss.core.operators.base import InvariantCheck, NodalDistribution, frozen_array

logger = get_logger(__name__)

VANDERMONDE_TOL = 1e-12
ANNIHILATION_TOL = 1e-10
LEADING_TOL = 1e-9


@dataclass(frozen=True)
class UndividedDiff:
    """D~_s x~^k = 0 for k < s and D~_s x~^s = s! on the undivided nodes."""

    s: int
    dist: NodalDistribution
    matrix: np.ndarray
    # first column of each row's window; the window spans s + 1 columns
    window_starts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", frozen_array(self.matrix))

    @property
    def n(self) -> int:
        return self.dist.n

    def _local_moments(self, k: int) -> np.ndarray:
        """Row i applied to (x~ - x~_w)^k, w the first node of its window."""
        x = self.dist.nodes
        starts = np.asarray(self.window_starts)
        offsets = np.arange(self.s + 1)
        cols = starts[:, None] + offsets
        local = x[cols] - x[starts][:, None]
        rows = np.take_along_axis(self.matrix, cols, axis=1)
        return np.sum(rows * local**k, axis=1)

    def checks(self) -> list[InvariantCheck]:
        # translated nodes keep the moments O(s^k) whatever the block size
        label = f"D~{self.s}:{self.dist.family}-p{self.dist.p}-N{self.n}"
        annihilation = max(float(np.max(np.abs(self._local_moments(k)))) for k in range(self.s))
        leading = float(np.max(np.abs(self._local_moments(self.s) - factorial(self.s)))) / factorial(self.s)
        width = int(np.max(np.count_nonzero(self.matrix, axis=1)))
        return [
            InvariantCheck(f"{label}:annihilation", annihilation, ANNIHILATION_TOL),
            InvariantCheck(f"{label}:leading", leading, LEADING_TOL),
            InvariantCheck(f"{label}:width", float(max(0, width - (self.s + 1))), 0.0),
        ]


@dataclass(frozen=True)
class BoundaryCorrection:
    diagonal: np.ndarray
    n_left_zeros: int
    n_right_zeros: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "diagonal", frozen_array(self.diagonal))

    @property
    def B(self) -> np.ndarray:
        return np.diag(self.diagonal)


def window_start(i: int, n: int, s: int) -> int:
    """Centered windows for even s, backward windows for odd s, clamped to the block."""
    start = i - s // 2 if s % 2 == 0 else i - s
    return min(max(start, 0), n - 1 - s)


def stencil_coefficients(nodes: np.ndarray, s: int) -> np.ndarray:
    """Weights c with sum c_j x_j^k = s! delta_{ks} for k = 0..s."""
    if np.any(np.diff(nodes) <= 0.0):
        raise SingularStencil(f"Stencil nodes are not distinct: {nodes}")
    shifted = nodes - 0.5 * (nodes[0] + nodes[-1])
    vandermonde = shifted[None, :] ** np.arange(s + 1)[:, None]
    rhs = np.zeros(s + 1)
    rhs[s] = factorial(s)
    try:
        coefficients = scipy.linalg.solve(vandermonde, rhs)
    except scipy.linalg.LinAlgError as exc:
        raise SingularStencil(f"Singular Vandermonde system on nodes {nodes}") from exc
    residual = float(np.max(np.abs(vandermonde @ coefficients - rhs))) / factorial(s)
    if residual > VANDERMONDE_TOL:
        raise SingularStencil(f"Vandermonde residual {residual:.2e} exceeds {VANDERMONDE_TOL:.0e}")
    return coefficients


def build_undivided_diff(dist: NodalDistribution, s: int) -> UndividedDiff:
    n = dist.n
    if s < 1:
        raise DissipationError(f"Dissipation order must be at least 1, got s={s}")
    if dist.family.is_spectral and s != dist.p:
        logger.warning(f"{dist.family} dissipation uses s = p = {dist.p}; ignoring s={s}")
        s = dist.p
    if s > n - 1:
        raise OrderTooHigh(f"s={s} needs at least {s + 1} nodes, got N={n}")

    matrix = np.zeros((n, n))
    starts = []
    for i in range(n):
        start = window_start(i, n, s)
        matrix[i, start:start + s + 1] = stencil_coefficients(dist.nodes[start:start + s + 1], s)
        starts.append(start)
    return UndividedDiff(s=s, dist=dist, matrix=matrix, window_starts=tuple(starts))


def build_boundary_correction(n: int, s: int) -> BoundaryCorrection:
    """Zeros at the ends of diag(B): ceil(s/2) on both sides for even s, on the left only for odd s."""
    if n < s + 1:
        raise OrderTooHigh(f"Boundary correction for s={s} needs N >= {s + 1}, got N={n}")
    n_left = s - s // 2
    n_right = n_left if s % 2 == 0 else 0
    diagonal = np.ones(n)
    diagonal[:n_left] = 0.0
    diagonal[n - n_right:] = 0.0
    return BoundaryCorrection(diagonal=diagonal, n_left_zeros=n_left, n_right_zeros=n_right)
