"""Nodal distributions: uniform FD nodes and Legendre Gauss(-Lobatto) nodes."""

from __future__ import annotations

import numpy as np
from numpy.polynomial import legendre

from sbpdiss.core.exceptions import InsufficientNodes, NoConvergence, UnsupportedFamily
from sbpdiss.core.logger import get_logger
from sbpdiss.core.operators.base import Family, NodalDistribution

logger = get_logger(__name__)

NEWTON_TOL = 1e-15
NEWTON_MAX_ITER = 100


def _legendre(degree: int) -> legendre.Legendre:
    return legendre.Legendre.basis(degree)


def _newton(poly: legendre.Legendre, seeds: np.ndarray) -> np.ndarray:
    dpoly = poly.deriv()
    roots = seeds.copy()
    for _ in range(NEWTON_MAX_ITER):
        step = poly(roots) / dpoly(roots)
        roots -= step
        if np.max(np.abs(step)) <= NEWTON_TOL:
            break
    else:
        # the last step may stall a few ulps above the tolerance
        if np.max(np.abs(poly(roots) / dpoly(roots))) > 1e3 * NEWTON_TOL:
            raise NoConvergence(f"Newton iteration for Legendre roots of degree {poly.degree()} did not converge")
    return roots


def _symmetrize(nodes: np.ndarray) -> np.ndarray:
    nodes = np.sort(nodes)
    return 0.5 * (nodes - nodes[::-1])


def gauss_lobatto_nodes(p: int) -> np.ndarray:
    """Roots of (1 - xi^2) P_p'(xi), ascending."""
    if p == 1:
        return np.array([-1.0, 1.0])
    seeds = -np.cos(np.pi * np.arange(1, p) / p)
    interior = _newton(_legendre(p).deriv(), seeds)
    return _symmetrize(np.concatenate([[-1.0], interior, [1.0]]))


def gauss_nodes(p: int) -> np.ndarray:
    """Roots of P_{p+1}(xi), ascending."""
    n = p + 1
    seeds = -np.cos(np.pi * (np.arange(1, n + 1) - 0.25) / (n + 0.5))
    return _symmetrize(_newton(_legendre(n), seeds))


def gauss_lobatto_weights(nodes: np.ndarray) -> np.ndarray:
    p = len(nodes) - 1
    return 2.0 / (p * (p + 1) * _legendre(p)(nodes) ** 2)


def gauss_weights(nodes: np.ndarray) -> np.ndarray:
    n = len(nodes)
    dpoly = _legendre(n).deriv()
    return 2.0 / ((1.0 - nodes**2) * dpoly(nodes) ** 2)


def minimum_csbp_nodes(p: int) -> int:
    """Smallest block that fits both boundary closures of a degree-p CSBP operator."""
    closure = 1 if p == 1 else 2 * p
    return max(2 * p + 1, 2 * closure + p)


def build_nodal_distribution(family: Family | str, p: int, n: int | None = None) -> NodalDistribution:
    """Construct nodes on the undivided reference domain [0, N-1]."""
    try:
        family = Family(family)
    except ValueError as exc:
        raise UnsupportedFamily(f"Unknown operator family: {family}. Available: CSBP, LGL, LG") from exc
    if family is Family.UFD:
        raise UnsupportedFamily("The upwind block has a fixed distribution; use build_upwind_pu2_block()")
    if p < 1:
        raise InsufficientNodes(f"Degree must be at least 1, got p={p}")

    if family is Family.CSBP:
        if n is None:
            raise InsufficientNodes("CSBP distributions need an explicit node count N")
        if n < minimum_csbp_nodes(p):
            raise InsufficientNodes(f"CSBP p={p} needs N >= {minimum_csbp_nodes(p)} nodes, got N={n}")
        return NodalDistribution(family=family, p=p, n=n, nodes=np.arange(n, dtype=float))

    if n is not None and n != p + 1:
        logger.warning(f"{family} distributions use N = p + 1 = {p + 1} nodes; ignoring N={n}")
    n = p + 1
    reference = gauss_lobatto_nodes(p) if family is Family.LGL else gauss_nodes(p)
    nodes = 0.5 * (reference + 1.0) * (n - 1)
    return NodalDistribution(family=family, p=p, n=n, nodes=nodes, reference_nodes=reference)
