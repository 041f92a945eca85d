"""Sampled property checks of assembled dissipation operators.

Every check returns an :class:`InvariantCheck` whose residual is already
normalized, so one tolerance per property applies across operators.
"""

from __future__ import annotations

import numpy as np

from sbpdiss.core.dissipation.assembly import DissipationOperator, build_dissipation
from sbpdiss.core.dissipation.coefficients import (
    CoefficientField,
    CoefficientMode,
    build_system_blocks,
    scalar_coefficient,
)
from sbpdiss.core.operators import Family, InvariantCheck, build_block_operator
from sbpdiss.core.physics import euler

CONSERVATION_TOL = 1e-12
DISSIPATIVITY_TOL = 1e-12
RANK_TOL = 1e-10
UNIQUENESS_TOL = 1e-10
SYMMETRY_TOL = 1e-12


def _weights(diss: DissipationOperator, components: int) -> np.ndarray:
    return np.repeat(diss.op.h, components)


def conservation_check(
        diss: DissipationOperator,
        rng: np.random.Generator,
        samples: int,
        coefficient: CoefficientField | None = None,
        components: int = 1,
        label: str = "",
) -> InvariantCheck:
    """max |1^T H A_D q| per equation over random q, relative to ||q||_inf ||A_D||_max."""
    matrix = diss.matrix(coefficient, components)
    q = rng.standard_normal((samples, matrix.shape[0]))
    weighted = (q @ matrix.T) * _weights(diss, components)
    totals = np.abs(weighted.reshape(samples, diss.n, components).sum(axis=1))
    scale = np.max(np.abs(q), axis=1)[:, None] * max(float(np.max(np.abs(matrix))), np.finfo(float).tiny)
    return InvariantCheck(f"{label}:conservation", float(np.max(totals / scale)), CONSERVATION_TOL)


def dissipativity_check(
        diss: DissipationOperator,
        rng: np.random.Generator,
        samples: int,
        coefficient: CoefficientField | None = None,
        components: int = 1,
        label: str = "",
) -> InvariantCheck:
    """max(q^T H A_D q, 0) over random q, relative to ||q||^2 ||H A_D||_max."""
    weighted = _weights(diss, components)[:, None] * diss.matrix(coefficient, components)
    q = rng.standard_normal((samples, weighted.shape[0]))
    quadratic = np.einsum("si,ij,sj->s", q, weighted, q)
    scale = np.sum(q * q, axis=1) * max(float(np.max(np.abs(weighted))), np.finfo(float).tiny)
    return InvariantCheck(f"{label}:dissipativity", float(max(0.0, np.max(quadratic / scale))), DISSIPATIVITY_TOL)


def symmetry_check(diss: DissipationOperator, label: str = "") -> InvariantCheck:
    """H A_D is symmetric for a constant coefficient."""
    weighted = diss.op.h[:, None] * diss.matrix(None)
    scale = max(float(np.max(np.abs(weighted))), np.finfo(float).tiny)
    return InvariantCheck(f"{label}:symmetry", float(np.max(np.abs(weighted - weighted.T))) / scale, SYMMETRY_TOL)


def random_euler_states(rng: np.random.Generator, n: int, dim: int = 1, gamma: float = euler.GAMMA) -> np.ndarray:
    """n admissible conservative states with rho, p in [0.5, 2] and |v_d| <= 1."""
    rho = rng.uniform(0.5, 2.0, n)
    velocity = rng.uniform(-1.0, 1.0, (n, dim))
    p = rng.uniform(0.5, 2.0, n)
    return euler.conservative(rho, velocity, p, gamma)


def random_coefficient(
        diss: DissipationOperator,
        rng: np.random.Generator,
        mode: CoefficientMode,
        dim: int = 1,
        gamma: float = euler.GAMMA,
) -> CoefficientField:
    """A coefficient of ``mode`` evaluated at random admissible data on the nodes."""
    if mode.is_system:
        return build_system_blocks(random_euler_states(rng, diss.n, dim, gamma), mode, diss.half_nodes, 0, gamma)
    return scalar_coefficient(rng.uniform(0.1, 2.0, diss.n), half_nodes=diss.half_nodes)


def se_rank_checks(family: Family | str, p: int, label: str = "") -> list[InvariantCheck]:
    """Rank one, annihilation of degree < p and independence from C for s = p on one element."""
    op = build_block_operator(family, p, None, 1.0)
    plain = build_dissipation(op, p, 1.0, include_B=False)
    dense = plain.matrix()
    singular = np.linalg.svd(dense, compute_uv=False)
    rank_residual = float(singular[1] / singular[0]) if len(singular) > 1 else 0.0

    x = op.dist.nodes
    scale = float(np.max(np.abs(dense)))
    annihilation = max(
        float(np.max(np.abs(dense @ x**k))) / (scale * max(1.0, float(np.max(np.abs(x**k))))) for k in range(p)
    )

    rng = np.random.default_rng(p)
    weighted = build_dissipation(op, p, 1.0, include_B=True, coefficient=scalar_coefficient(rng.uniform(0.5, 2.0, op.n)))
    other = weighted.matrix()
    difference = float(np.max(np.abs(dense / np.linalg.norm(dense) - other / np.linalg.norm(other))))
    return [
        InvariantCheck(f"{label}:rank-one", rank_residual, RANK_TOL),
        InvariantCheck(f"{label}:annihilation", annihilation, RANK_TOL),
        InvariantCheck(f"{label}:uniqueness", difference, UNIQUENESS_TOL),
    ]
