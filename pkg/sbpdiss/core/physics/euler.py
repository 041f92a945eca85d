"""Compressible Euler equations in one and two space dimensions.

States are arrays whose last axis holds ``[rho, rho*v_1, ..., rho*v_d, e]``.
All functions broadcast over leading axes and accept complex input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbpdiss.core.exceptions import NonAdmissibleState
from sbpdiss.core.physics.analytic import cabs, field_dtype

GAMMA = 1.4


def dimension(u: np.ndarray) -> int:
    dim = np.shape(u)[-1] - 2
    if dim not in (1, 2):
        raise ValueError(f"Euler states need 3 or 4 components, got {np.shape(u)[-1]}")
    return dim


def primitive(u: np.ndarray, gamma: float = GAMMA) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rho = u[..., 0]
    velocity = u[..., 1:-1] / rho[..., None]
    kinetic = 0.5 * rho * np.sum(velocity * velocity, axis=-1)
    p = (gamma - 1.0) * (u[..., -1] - kinetic)
    return rho, velocity, p


def conservative(rho: np.ndarray, velocity: np.ndarray, p: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    rho = np.asarray(rho)
    velocity = np.asarray(velocity)
    p = np.asarray(p)
    energy = p / (gamma - 1.0) + 0.5 * rho * np.sum(velocity * velocity, axis=-1)
    return np.concatenate([rho[..., None], rho[..., None] * velocity, energy[..., None]], axis=-1)


def sound_speed(u: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    rho, _, p = primitive(u, gamma)
    return np.sqrt(gamma * p / rho)


def is_admissible(u: np.ndarray, gamma: float = GAMMA) -> bool:
    rho, _, p = primitive(u, gamma)
    with np.errstate(invalid="ignore"):
        return bool(np.all(np.real(rho) > 0.0) and np.all(np.real(p) > 0.0))


def check_admissible(u: np.ndarray, gamma: float = GAMMA) -> None:
    if not is_admissible(u, gamma):
        rho, _, p = primitive(u, gamma)
        raise NonAdmissibleState(
            f"Non-admissible state: min density {np.min(np.real(rho)):.6g}, "
            f"min pressure {np.min(np.real(p)):.6g}"
        )


def physical_entropy(u: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    """s = ln(p / rho^gamma)."""
    rho, _, p = primitive(u, gamma)
    return np.log(p) - gamma * np.log(rho)


def entropy_function(u: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    """Mathematical entropy S = -rho s / (gamma - 1), convex in u."""
    return -u[..., 0] * physical_entropy(u, gamma) / (gamma - 1.0)


def entropy_variables(u: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    rho, velocity, p = primitive(u, gamma)
    s = np.log(p) - gamma * np.log(rho)
    beta = rho / p
    first = (gamma - s) / (gamma - 1.0) - 0.5 * beta * np.sum(velocity * velocity, axis=-1)
    return np.concatenate([first[..., None], beta[..., None] * velocity, -beta[..., None]], axis=-1)


def conservative_from_entropy(w: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    """Inverse of :func:`entropy_variables`."""
    beta = -w[..., -1]
    velocity = w[..., 1:-1] / beta[..., None]
    s = gamma - (gamma - 1.0) * (w[..., 0] + 0.5 * beta * np.sum(velocity * velocity, axis=-1))
    rho = (beta * np.exp(s)) ** (1.0 / (1.0 - gamma))
    p = rho / beta
    return conservative(rho, velocity, p, gamma)


def entropy_potential(u: np.ndarray, direction: int = 0) -> np.ndarray:
    """psi = w . f - F_S = rho v_direction."""
    return u[..., 1 + direction]


def flux(u: np.ndarray, direction: int = 0, gamma: float = GAMMA) -> np.ndarray:
    rho, velocity, p = primitive(u, gamma)
    vn = velocity[..., direction]
    out = np.empty(np.shape(u), dtype=field_dtype(u))
    out[..., 0] = u[..., 1 + direction]
    out[..., 1:-1] = u[..., 1 + direction, None] * velocity
    out[..., 1 + direction] += p
    out[..., -1] = vn * (u[..., -1] + p)
    return out


def max_wave_speed(u: np.ndarray, direction: int | None = None, gamma: float = GAMMA) -> np.ndarray:
    """|v_n| + c, or the maximum over directions when ``direction`` is None."""
    rho, velocity, p = primitive(u, gamma)
    c = np.sqrt(gamma * p / rho)
    if direction is not None:
        return cabs(velocity[..., direction]) + c
    speeds = cabs(velocity) + c[..., None]
    index = np.argmax(np.real(speeds), axis=-1)
    return np.take_along_axis(speeds, index[..., None], axis=-1)[..., 0]


@dataclass(frozen=True)
class EigenSystem:
    """Right eigenvectors R (columns), eigenvalues and the Barth scaling T^2."""

    eigenvalues: np.ndarray
    right: np.ndarray
    scaling: np.ndarray

    @property
    def barth(self) -> np.ndarray:
        """X = R T with X X^T = du/dw."""
        return self.right * np.sqrt(self.scaling)[..., None, :]


def eigensystem(u: np.ndarray, direction: int = 0, gamma: float = GAMMA) -> EigenSystem:
    dim = dimension(u)
    rho, velocity, p = primitive(u, gamma)
    c = np.sqrt(gamma * p / rho)
    enthalpy = (u[..., -1] + p) / rho
    vn = velocity[..., direction]
    q2 = np.sum(velocity * velocity, axis=-1)
    n = dim + 2
    dtype = field_dtype(u)
    right = np.zeros(np.shape(u)[:-1] + (n, n), dtype=dtype)

    # acoustic (v_n - c)
    right[..., 0, 0] = 1.0
    right[..., 1:-1, 0] = velocity
    right[..., 1 + direction, 0] -= c
    right[..., -1, 0] = enthalpy - c * vn
    # entropy wave
    right[..., 0, 1] = 1.0
    right[..., 1:-1, 1] = velocity
    right[..., -1, 1] = 0.5 * q2
    # acoustic (v_n + c)
    right[..., 0, -1] = 1.0
    right[..., 1:-1, -1] = velocity
    right[..., 1 + direction, -1] += c
    right[..., -1, -1] = enthalpy + c * vn

    ones = np.ones_like(rho)
    acoustic = rho / (2.0 * gamma)
    entropic = rho * (gamma - 1.0) / gamma
    if dim == 1:
        eigenvalues = np.stack([vn - c, vn, vn + c], axis=-1)
        scaling = np.stack([acoustic, entropic, acoustic], axis=-1)
    else:
        tangent = 1 - direction
        # shear wave
        right[..., 1 + tangent, 2] = 1.0
        right[..., -1, 2] = velocity[..., tangent]
        eigenvalues = np.stack([vn - c, vn, vn * ones, vn + c], axis=-1)
        scaling = np.stack([acoustic, entropic, p, acoustic], axis=-1)
    return EigenSystem(eigenvalues=eigenvalues, right=right, scaling=scaling)


def dudw(u: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    """Symmetric positive definite change of variables du/dw."""
    dim = dimension(u)
    rho, velocity, p = primitive(u, gamma)
    energy = u[..., -1]
    enthalpy = (energy + p) / rho
    c2 = gamma * p / rho
    n = dim + 2
    out = np.zeros(np.shape(u)[:-1] + (n, n), dtype=field_dtype(u))
    out[..., 0, 0] = rho
    out[..., 0, 1:-1] = rho[..., None] * velocity
    out[..., 0, -1] = energy
    out[..., 1:-1, 1:-1] = rho[..., None, None] * velocity[..., :, None] * velocity[..., None, :]
    for k in range(dim):
        out[..., 1 + k, 1 + k] += p
    out[..., 1:-1, -1] = (rho * enthalpy)[..., None] * velocity
    out[..., -1, -1] = rho * enthalpy**2 - c2 * p / (gamma - 1.0)
    out[..., 1:-1, 0] = out[..., 0, 1:-1]
    out[..., -1, 0] = out[..., 0, -1]
    out[..., -1, 1:-1] = out[..., 1:-1, -1]
    return out


def absolute_jacobian(system: EigenSystem) -> np.ndarray:
    """R |Lambda| R^{-1}."""
    right = system.right
    scaled = right * cabs(system.eigenvalues)[..., None, :]
    # solve R^T Y = (R |L|)^T, then |A| = Y^T
    return np.swapaxes(np.linalg.solve(np.swapaxes(right, -1, -2), np.swapaxes(scaled, -1, -2)), -1, -2)


def symmetrized_absolute_jacobian(system: EigenSystem) -> np.ndarray:
    """X |Lambda| X^T with Barth-scaled eigenvectors."""
    x = system.barth
    return np.einsum("...ik,...k,...jk->...ij", x, cabs(system.eigenvalues), x)


def flux_jacobian(u: np.ndarray, direction: int = 0, gamma: float = GAMMA) -> np.ndarray:
    system = eigensystem(u, direction, gamma)
    right = system.right
    scaled = right * system.eigenvalues[..., None, :]
    return np.swapaxes(np.linalg.solve(np.swapaxes(right, -1, -2), np.swapaxes(scaled, -1, -2)), -1, -2)


@dataclass(frozen=True)
class FluxAndJacobian:
    flux: np.ndarray
    jacobian: np.ndarray
    eigenvectors: np.ndarray
    eigenvalues: np.ndarray
    barth_eigenvectors: np.ndarray


def euler_flux_and_jacobian(u: np.ndarray, direction: int = 0, gamma: float = GAMMA) -> FluxAndJacobian:
    check_admissible(u, gamma)
    system = eigensystem(u, direction, gamma)
    return FluxAndJacobian(
        flux=flux(u, direction, gamma),
        jacobian=flux_jacobian(u, direction, gamma),
        eigenvectors=system.right,
        eigenvalues=system.eigenvalues,
        barth_eigenvectors=system.barth,
    )


def roe_average(u_left: np.ndarray, u_right: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    rho_l, v_l, p_l = primitive(u_left, gamma)
    rho_r, v_r, p_r = primitive(u_right, gamma)
    sl, sr = np.sqrt(rho_l), np.sqrt(rho_r)
    weight_l = (sl / (sl + sr))[..., None]
    weight_r = (sr / (sl + sr))[..., None]
    velocity = weight_l * v_l + weight_r * v_r
    h_l = (u_left[..., -1] + p_l) / rho_l
    h_r = (u_right[..., -1] + p_r) / rho_r
    enthalpy = weight_l[..., 0] * h_l + weight_r[..., 0] * h_r
    rho = sl * sr
    c2 = (gamma - 1.0) * (enthalpy - 0.5 * np.sum(velocity * velocity, axis=-1))
    return conservative(rho, velocity, rho * c2 / gamma, gamma)


@dataclass(frozen=True)
class EulerState:
    """One state of the Euler equations; a thin typed view over the array form."""

    rho: float
    momentum: tuple[float, ...]
    energy: float
    gamma: float = GAMMA

    @classmethod
    def from_primitive(cls, rho: float, velocity: tuple[float, ...], p: float, gamma: float = GAMMA) -> EulerState:
        u = conservative(np.asarray(rho), np.asarray(velocity, dtype=float), np.asarray(p), gamma)
        return cls.from_array(u, gamma)

    @classmethod
    def from_array(cls, u: np.ndarray, gamma: float = GAMMA) -> EulerState:
        u = np.asarray(u, dtype=float)
        return cls(rho=float(u[0]), momentum=tuple(float(m) for m in u[1:-1]), energy=float(u[-1]), gamma=gamma)

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, *self.momentum, self.energy])

    @property
    def velocity(self) -> np.ndarray:
        return np.asarray(self.momentum) / self.rho

    @property
    def pressure(self) -> float:
        return float(primitive(self.as_array(), self.gamma)[2])

    @property
    def sound_speed(self) -> float:
        return float(np.sqrt(self.gamma * self.pressure / self.rho))

    @property
    def admissible(self) -> bool:
        return self.rho > 0.0 and self.pressure > 0.0

    def entropy_variables(self) -> np.ndarray:
        check_admissible(self.as_array(), self.gamma)
        return entropy_variables(self.as_array(), self.gamma)
