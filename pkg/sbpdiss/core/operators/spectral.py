"""Spectral-element SBP operators on Legendre-Gauss-Lobatto and Legendre-Gauss nodes."""

from __future__ import annotations

import numpy as np

from sbpdiss.core.operators.base import Family, NodalDistribution, SbpOperator, ensure_valid
from sbpdiss.core.operators.nodes import gauss_lobatto_weights, gauss_weights


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def lagrange_derivative(nodes: np.ndarray) -> np.ndarray:
    """D_ij = l_j'(xi_i) via the barycentric formula; rows sum to zero exactly."""
    weights = barycentric_weights(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    d = (weights[None, :] / weights[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -np.sum(d, axis=1))
    return d


def lagrange_interpolant(nodes: np.ndarray, point: float) -> np.ndarray:
    """Values of all Lagrange basis polynomials at ``point``."""
    hit = np.isclose(nodes, point, rtol=0.0, atol=1e-15)
    if np.any(hit):
        return hit.astype(float)
    weights = barycentric_weights(nodes)
    terms = weights / (point - nodes)
    return terms / np.sum(terms)


def build_spectral_operator(dist: NodalDistribution, element_size: float) -> SbpOperator:
    reference = dist.reference_nodes
    # x = element_size * (N-1) * (xi + 1) / 2
    scale = 0.5 * element_size * (dist.n - 1)
    if dist.family is Family.LGL:
        weights = gauss_lobatto_weights(reference)
    else:
        weights = gauss_weights(reference)
    h = scale * weights
    d = lagrange_derivative(reference) / scale
    q = h[:, None] * d
    e_left = lagrange_interpolant(reference, -1.0)
    e_right = lagrange_interpolant(reference, 1.0)
    boundary = np.outer(e_right, e_right) - np.outer(e_left, e_left)
    op = SbpOperator(
        dist=dist,
        h=h,
        D=d,
        Q=q,
        E=boundary,
        e_left=e_left,
        e_right=e_right,
        element_size=element_size,
    )
    return ensure_valid(op)
