"""Classical diagonal-norm SBP finite-difference operators, degrees 1 to 4.

The norms are the standard diagonal norms whose boundary weights integrate
monomials up to degree 2p-1. The skew-symmetric boundary block of Q is
solved from the accuracy conditions D x^k = k x^(k-1), k <= p, on the
boundary rows. The solution is unique for p <= 2. For p = 3 the single
free parameter is pinned to its classical value. For p = 4 the
minimum-norm member of the three-parameter family is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.linalg

from sbpdiss.core.exceptions import ClosureError, DegreeUnsupported, InsufficientNodes
from sbpdiss.core.logger import get_logger
from sbpdiss.core.operators.base import NodalDistribution, SbpOperator, ensure_valid
from sbpdiss.core.operators.nodes import minimum_csbp_nodes

logger = get_logger(__name__)

CLOSURE_RESIDUAL_TOL = 1e-11


def _fractions(*values: str) -> tuple[float, ...]:
    return tuple(float(Fraction(value)) for value in values)


@dataclass(frozen=True)
class CsbpClosure:
    p: int
    # right half of the antisymmetric interior stencil: c_1 ... c_p
    interior: tuple[float, ...]
    # boundary weights of the undivided norm
    norm: tuple[float, ...]
    # fixed entries (i, j) -> value of the skew boundary block
    pins: dict[tuple[int, int], float] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.norm)


CLOSURES: dict[int, CsbpClosure] = {
    1: CsbpClosure(
        p=1,
        interior=_fractions("1/2"),
        norm=_fractions("1/2"),
    ),
    2: CsbpClosure(
        p=2,
        interior=_fractions("2/3", "-1/12"),
        norm=_fractions("17/48", "59/48", "43/48", "49/48"),
    ),
    3: CsbpClosure(
        p=3,
        interior=_fractions("3/4", "-3/20", "1/60"),
        norm=_fractions("13649/43200", "12013/8640", "2711/4320", "5359/4320", "7877/8640", "43801/43200"),
        pins={(4, 5): float(Fraction(342523, 518400))},
    ),
    4: CsbpClosure(
        p=4,
        interior=_fractions("4/5", "-1/5", "4/105", "-1/280"),
        norm=_fractions(
            "1498139/5080320",
            "1107307/725760",
            "20761/80640",
            "1304999/725760",
            "299527/725760",
            "103097/80640",
            "670091/725760",
            "5127739/5080320",
        ),
    ),
}


def _coupling(closure: CsbpClosure, i: int, j: int) -> float:
    """Entry S[i, j] for a boundary row i and an interior column j."""
    offset = j - i
    return closure.interior[offset - 1] if 1 <= offset <= closure.p else 0.0


def _accuracy_system(
        closure: CsbpClosure,
        pins: dict[tuple[int, int], float],
) -> tuple[np.ndarray, np.ndarray, list[tuple[int, int]]]:
    r, p = closure.size, closure.p
    unknowns = [(i, j) for i in range(r) for j in range(i + 1, r) if (i, j) not in pins]
    column = {pair: index for index, pair in enumerate(unknowns)}
    rows, rhs = [], []
    x = np.arange(r + p, dtype=float)
    for i in range(r):
        for k in range(p + 1):
            row = np.zeros(len(unknowns))
            target = k * closure.norm[i] * x[i] ** (k - 1) if k > 0 else 0.0
            if i == 0:
                # E/2 contributes -1/2 on the first row
                target += 0.5 * x[0] ** k
            for j in range(r, i + p + 1):
                target -= _coupling(closure, i, j) * x[j] ** k
            for j in range(r):
                if j == i:
                    continue
                pair, sign = ((i, j), 1.0) if i < j else ((j, i), -1.0)
                if pair in pins:
                    target -= sign * pins[pair] * x[j] ** k
                else:
                    row[column[pair]] += sign * x[j] ** k
            rows.append(row)
            rhs.append(target)
    return np.array(rows), np.array(rhs), unknowns


def _solve_block(closure: CsbpClosure, pins: dict[tuple[int, int], float]) -> tuple[np.ndarray, float]:
    r = closure.size
    matrix, rhs, unknowns = _accuracy_system(closure, pins)
    block = np.zeros((r, r))
    if unknowns:
        solution, *_ = scipy.linalg.lstsq(matrix, rhs)
        residual = float(np.max(np.abs(matrix @ solution - rhs)))
        for (i, j), value in zip(unknowns, solution):
            block[i, j], block[j, i] = value, -value
    else:
        residual = float(np.max(np.abs(rhs))) if rhs.size else 0.0
    for (i, j), value in pins.items():
        block[i, j], block[j, i] = value, -value
    return block, residual / max(1.0, float(np.max(np.abs(rhs))))


@lru_cache
def skew_boundary_block(p: int) -> np.ndarray:
    """Skew-symmetric r x r block of S = Q - E/2 at the left boundary."""
    closure = CLOSURES[p]
    block, residual = _solve_block(closure, closure.pins)
    if residual > CLOSURE_RESIDUAL_TOL and closure.pins:
        logger.warning(
            f"CSBP p={p}: pinned closure inconsistent (residual {residual:.2e}); using minimum-norm closure",
        )
        block, residual = _solve_block(closure, {})
    if residual > CLOSURE_RESIDUAL_TOL:
        raise ClosureError(f"CSBP p={p}: accuracy conditions not solvable (residual {residual:.2e})")
    return block


def build_csbp_operator(dist: NodalDistribution, element_size: float) -> SbpOperator:
    p, n = dist.p, dist.n
    if p not in CLOSURES:
        raise DegreeUnsupported(f"CSBP operators are available for p = 1..4, got p={p}")
    if n < minimum_csbp_nodes(p):
        raise InsufficientNodes(f"CSBP p={p} needs N >= {minimum_csbp_nodes(p)} nodes, got N={n}")
    closure = CLOSURES[p]
    r = closure.size

    skew = np.zeros((n, n))
    for i in range(r, n - r):
        for k, c in enumerate(closure.interior, start=1):
            skew[i, i + k] = c
            skew[i, i - k] = -c
    for i in range(r):
        for j in range(r, i + p + 1):
            skew[i, j] = _coupling(closure, i, j)
            skew[j, i] = -skew[i, j]
    skew[:r, :r] = skew_boundary_block(p)
    # right closure: S[N-1-i, N-1-j] = -S[i, j]
    left = skew[:r, : r + p].copy()
    skew[n - r:, n - r - p:] = -left[::-1, ::-1]
    skew[n - r - p:, n - r:] = -skew[n - r:, n - r - p:].T

    boundary = np.zeros((n, n))
    boundary[0, 0], boundary[-1, -1] = -1.0, 1.0
    norm = np.ones(n)
    norm[:r] = closure.norm
    norm[n - r:] = closure.norm[::-1]

    q = skew + 0.5 * boundary
    h = element_size * norm
    d = q / h[:, None]
    e_left = np.zeros(n)
    e_right = np.zeros(n)
    e_left[0], e_right[-1] = 1.0, 1.0
    op = SbpOperator(
        dist=dist,
        h=h,
        D=d,
        Q=q,
        E=boundary,
        e_left=e_left,
        e_right=e_right,
        element_size=element_size,
        metadata={"closure": "pinned" if closure.pins else "unique" if p <= 2 else "minimum-norm"},
    )
    return ensure_valid(op)
