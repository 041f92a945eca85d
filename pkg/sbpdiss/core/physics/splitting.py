"""Flux-vector splittings f = f+ + f- of the Euler flux."""

from __future__ import annotations

import numpy as np

from sbpdiss.core.physics import euler
from sbpdiss.core.physics.analytic import field_dtype, negative_part, positive_part


def _unit(direction: int, dim: int) -> np.ndarray:
    normal = np.zeros(dim)
    normal[direction] = 1.0
    return normal


def steger_warming(u: np.ndarray, direction: int = 0, gamma: float = euler.GAMMA) -> tuple[np.ndarray, np.ndarray]:
    dim = euler.dimension(u)
    rho, velocity, p = euler.primitive(u, gamma)
    c = np.sqrt(gamma * p / rho)
    vn = velocity[..., direction]
    q2 = np.sum(velocity * velocity, axis=-1)
    normal = _unit(direction, dim)

    def part(split) -> np.ndarray:
        lam1, lam2, lam3 = split(vn - c), split(vn), split(vn + c)
        alpha = 2.0 * (gamma - 1.0) * lam2 + lam1 + lam3
        acoustic = lam3 - lam1
        out = np.empty(np.shape(u), dtype=field_dtype(u))
        out[..., 0] = alpha
        out[..., 1:-1] = alpha[..., None] * velocity + (c * acoustic)[..., None] * normal
        out[..., -1] = alpha * 0.5 * q2 + c * vn * acoustic + c * c * (lam1 + lam3) / (gamma - 1.0)
        return (rho / (2.0 * gamma))[..., None] * out

    return part(positive_part), part(negative_part)


def drikakis_tsangaris(u: np.ndarray, direction: int = 0, gamma: float = euler.GAMMA) -> tuple[np.ndarray, np.ndarray]:
    """Splitting on the acoustic speeds v_n +- c with the pressure split by the acoustic jump."""
    dim = euler.dimension(u)
    rho, velocity, p = euler.primitive(u, gamma)
    c = np.sqrt(gamma * p / rho)
    vn = velocity[..., direction]
    enthalpy = (u[..., -1] + p) / rho
    normal = _unit(direction, dim)

    def part(split) -> np.ndarray:
        lam_a, lam_b = split(vn + c), split(vn - c)
        mass = 0.5 * rho * (lam_a + lam_b)
        pressure = 0.5 * p * (lam_a - lam_b) / c
        out = np.empty(np.shape(u), dtype=field_dtype(u))
        out[..., 0] = mass
        out[..., 1:-1] = mass[..., None] * velocity + pressure[..., None] * normal
        out[..., -1] = mass * enthalpy
        return out

    return part(positive_part), part(negative_part)
