"""Entropy-conservative two-point fluxes and interface dissipation for Euler."""

from __future__ import annotations

import numpy as np

from sbpdiss.core.physics import euler
from sbpdiss.core.physics.analytic import cmax, field_dtype

LOG_MEAN_SERIES_THRESHOLD = 1e-4


def log_mean(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(y - x) / ln(y / x) with an even series near x = y.

    With f = (x - y)/(x + y), ln(y/x) = -2 artanh(f), so the mean is
    (x + y) / (2 + 2f^2/3 + 2f^4/5 + 2f^6/7) up to O(f^8).
    """
    f2 = (x - y) ** 2 / (x + y) ** 2
    series = (x + y) / (2.0 + f2 * (2.0 / 3.0 + f2 * (2.0 / 5.0 + f2 * 2.0 / 7.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = (y - x) / np.log(y / x)
    return np.where(np.real(f2) < LOG_MEAN_SERIES_THRESHOLD, series, exact)


def chandrashekar_flux(
        u_left: np.ndarray,
        u_right: np.ndarray,
        direction: int = 0,
        gamma: float = euler.GAMMA,
) -> np.ndarray:
    rho_l, v_l, p_l = euler.primitive(u_left, gamma)
    rho_r, v_r, p_r = euler.primitive(u_right, gamma)
    beta_l = 0.5 * rho_l / p_l
    beta_r = 0.5 * rho_r / p_r

    rho_mean = log_mean(rho_l, rho_r)
    beta_mean = log_mean(beta_l, beta_r)
    v_avg = 0.5 * (v_l + v_r)
    p_hat = 0.5 * (rho_l + rho_r) / (beta_l + beta_r)
    velocity_square_avg = 0.5 * (np.sum(v_l * v_l, axis=-1) + np.sum(v_r * v_r, axis=-1))

    out = np.empty(np.broadcast_shapes(np.shape(u_left), np.shape(u_right)), dtype=field_dtype(u_left, u_right))
    mass = rho_mean * v_avg[..., direction]
    out[..., 0] = mass
    out[..., 1:-1] = mass[..., None] * v_avg
    out[..., 1 + direction] += p_hat
    out[..., -1] = (
        mass * 0.5 * (1.0 / ((gamma - 1.0) * beta_mean) - velocity_square_avg)
        + np.sum(out[..., 1:-1] * v_avg, axis=-1)
    )
    return out


def ranocha_flux_2d(
        u_left: np.ndarray,
        u_right: np.ndarray,
        direction: int = 0,
        gamma: float = euler.GAMMA,
) -> np.ndarray:
    """Kinetic-energy-preserving and entropy-conservative flux; also valid in 1D."""
    rho_l, v_l, p_l = euler.primitive(u_left, gamma)
    rho_r, v_r, p_r = euler.primitive(u_right, gamma)

    rho_mean = log_mean(rho_l, rho_r)
    inv_rho_p_mean = 1.0 / log_mean(rho_l / p_l, rho_r / p_r)
    v_avg = 0.5 * (v_l + v_r)
    p_avg = 0.5 * (p_l + p_r)
    velocity_square_avg = 0.5 * np.sum(v_l * v_r, axis=-1)

    out = np.empty(np.broadcast_shapes(np.shape(u_left), np.shape(u_right)), dtype=field_dtype(u_left, u_right))
    mass = rho_mean * v_avg[..., direction]
    out[..., 0] = mass
    out[..., 1:-1] = mass[..., None] * v_avg
    out[..., 1 + direction] += p_avg
    out[..., -1] = (
        mass * (velocity_square_avg + inv_rho_p_mean / (gamma - 1.0))
        + 0.5 * (p_l * v_r[..., direction] + p_r * v_l[..., direction])
    )
    return out


def central_flux(u_left: np.ndarray, u_right: np.ndarray, direction: int = 0, gamma: float = euler.GAMMA) -> np.ndarray:
    return 0.5 * (euler.flux(u_left, direction, gamma) + euler.flux(u_right, direction, gamma))


# Interface dissipation: the numerical flux is f_sym(uL, uR) - dissipation(uL, uR).


def rusanov_dissipation(
        u_left: np.ndarray,
        u_right: np.ndarray,
        direction: int = 0,
        gamma: float = euler.GAMMA,
) -> np.ndarray:
    speed = cmax(euler.max_wave_speed(u_left, direction, gamma), euler.max_wave_speed(u_right, direction, gamma))
    return 0.5 * speed[..., None] * (u_right - u_left)


def roe_matrix_dissipation(
        u_left: np.ndarray,
        u_right: np.ndarray,
        direction: int = 0,
        gamma: float = euler.GAMMA,
) -> np.ndarray:
    """1/2 |A(u_Roe)| (uR - uL)."""
    system = euler.eigensystem(euler.roe_average(u_left, u_right, gamma), direction, gamma)
    absolute = euler.absolute_jacobian(system)
    return 0.5 * np.einsum("...ij,...j->...i", absolute, u_right - u_left)


def entropy_matrix_dissipation(
        u_left: np.ndarray,
        u_right: np.ndarray,
        direction: int = 0,
        gamma: float = euler.GAMMA,
) -> np.ndarray:
    """1/2 X |Lambda| X^T (wR - wL) at the Roe state; entropy dissipative for any jump."""
    system = euler.eigensystem(euler.roe_average(u_left, u_right, gamma), direction, gamma)
    jump = euler.entropy_variables(u_right, gamma) - euler.entropy_variables(u_left, gamma)
    return 0.5 * np.einsum("...ij,...j->...i", euler.symmetrized_absolute_jacobian(system), jump)
