"""The 5-node, degree p_u = 2 upwind SBP operator pair on [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbpdiss.core.operators.base import Family, NodalDistribution, SbpOperator, frozen_array

# rows of D+ on [0, 1] with h = 1/4
D_PLUS_PU2 = (
    (-12.0, 20.0, -8.0, 0.0, 0.0),
    (-0.8, -4.0, 6.4, -1.6, 0.0),
    (0.0, 0.0, -6.0, 8.0, -2.0),
    (0.0, 0.0, 0.0, -4.0, 4.0),
    (0.0, 0.0, 0.0, -4.0, 4.0),
)
NORM_PU2 = tuple(value / 16.0 for value in (1.0, 5.0, 4.0, 5.0, 1.0))


@dataclass(frozen=True)
class UpwindOperator:
    d_plus: np.ndarray
    d_minus: np.ndarray
    h: np.ndarray
    block_length: float = 1.0

    def __post_init__(self) -> None:
        for name in ("d_plus", "d_minus", "h"):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))

    @property
    def n(self) -> int:
        return len(self.h)

    @property
    def H(self) -> np.ndarray:
        return np.diag(self.h)

    @property
    def d_central(self) -> np.ndarray:
        return 0.5 * (self.d_plus + self.d_minus)

    @property
    def S(self) -> np.ndarray:
        """Symmetric positive semi-definite dissipative part, -H (D+ - D-) / 2."""
        return -0.5 * self.h[:, None] * (self.d_plus - self.d_minus)

    @property
    def element_size(self) -> float:
        return self.block_length / (self.n - 1)

    def rescaled(self, block_length: float) -> UpwindOperator:
        ratio = self.block_length / block_length
        return UpwindOperator(
            d_plus=self.d_plus * ratio,
            d_minus=self.d_minus * ratio,
            h=self.h / ratio,
            block_length=block_length,
        )

    def central_operator(self) -> SbpOperator:
        """The central SBP operator (D+ + D-)/2 with the same norm."""
        n = self.n
        boundary = np.zeros((n, n))
        boundary[0, 0], boundary[-1, -1] = -1.0, 1.0
        e_left = np.zeros(n)
        e_right = np.zeros(n)
        e_left[0], e_right[-1] = 1.0, 1.0
        dist = NodalDistribution(family=Family.UFD, p=1, n=n, nodes=np.arange(n, dtype=float))
        return SbpOperator(
            dist=dist,
            h=self.h,
            D=self.d_central,
            Q=self.h[:, None] * self.d_central,
            E=boundary,
            e_left=e_left,
            e_right=e_right,
            element_size=self.element_size,
        )


def rotate_minus(d_plus: np.ndarray) -> np.ndarray:
    """[D-]_{i,j} = -[D+]_{N-1-i, N-1-j} (0-based)."""
    return -np.asarray(d_plus)[::-1, ::-1]


def build_upwind_pu2_block() -> UpwindOperator:
    d_plus = np.array(D_PLUS_PU2)
    return UpwindOperator(d_plus=d_plus, d_minus=rotate_minus(d_plus), h=np.array(NORM_PU2))
