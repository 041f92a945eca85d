"""Scalar conservation laws: linear convection and inviscid Burgers."""

from __future__ import annotations

import numpy as np

from sbpdiss.core.physics.analytic import cabs, cmax


def linear_flux(u: np.ndarray, a: float = 1.0) -> np.ndarray:
    return a * u


def burgers_flux(u: np.ndarray) -> np.ndarray:
    return 0.5 * u * u


def burgers_ec_flux(u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
    """Entropy-conservative flux for the square entropy u^2/2."""
    return (u_left * u_left + u_left * u_right + u_right * u_right) / 6.0


def burgers_rusanov_dissipation(u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
    """Dissipative part of the Rusanov interface flux, 1/2 max(|uL|, |uR|) (uR - uL).

    The SAT subtracts it from the central flux, so the interface flux is
    (f(uL) + f(uR)) / 2 + f_diss with f_diss = -max(|uL|, |uR|)(uR - uL) / 2.
    """
    return 0.5 * cmax(cabs(u_left), cabs(u_right)) * (u_right - u_left)


def linear_upwind_dissipation(u_left: np.ndarray, u_right: np.ndarray, a: float = 1.0) -> np.ndarray:
    """Lax-Friedrichs penalty; for constant a this is the upwind flux."""
    return 0.5 * abs(a) * (u_right - u_left)


def burgers_flux_split(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """f+- = (u^2/2 +- |u| u) / 2."""
    half_square = 0.5 * u * u
    upwinded = cabs(u) * u
    return 0.5 * (half_square + upwinded), 0.5 * (half_square - upwinded)
