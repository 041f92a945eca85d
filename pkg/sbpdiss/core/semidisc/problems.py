"""Initial conditions and exact solutions of the test problems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbpdiss.core.physics import euler

GAUSSIAN_CENTER = 0.5
GAUSSIAN_WIDTH = 0.08


def gaussian(x: np.ndarray, period: float = 1.0, images: int = 2) -> np.ndarray:
    """exp(-0.5 ((x - 0.5)/0.08)^2), summed over periodic images so the data is smooth on the circle."""
    shifted = np.mod(x, period)
    total = np.zeros_like(shifted, dtype=float)
    for m in range(-images, images + 1):
        total += np.exp(-0.5 * ((shifted + m * period - GAUSSIAN_CENTER) / GAUSSIAN_WIDTH) ** 2)
    return total


def sine_wave(x: np.ndarray) -> np.ndarray:
    return np.sin(4.0 * np.pi * x)


def convection_exact(profile, x: np.ndarray, t: float, a: float = 1.0, x0: float = 0.0, length: float = 1.0) -> np.ndarray:
    return profile(x0 + np.mod(x - a * t - x0, length))


def burgers_sine(x: np.ndarray, beta: float = 1.5) -> np.ndarray:
    return np.sin(2.0 * np.pi * x) + beta


def density_wave(
        x: np.ndarray,
        t: float = 0.0,
        amplitude: float = 0.98,
        velocity: float = 0.1,
        pressure: float = 20.0,
        gamma: float = euler.GAMMA,
) -> np.ndarray:
    """rho = 1 + 0.98 sin(2 pi (x - v t)), v = 0.1, p = 20; exact for all t."""
    rho = 1.0 + amplitude * np.sin(2.0 * np.pi * (x - velocity * t))
    v = np.full(np.shape(x) + (1,), velocity)
    return euler.conservative(rho, v, np.full(np.shape(x), pressure), gamma)


@dataclass(frozen=True)
class IsentropicVortex:
    mach: float = 0.5
    strength: float = 0.2
    radius: float = 0.5
    gamma: float = euler.GAMMA
    x0: float = -5.0
    x1: float = 5.0

    @property
    def period(self) -> float:
        return (self.x1 - self.x0) / self.mach

    def primitive(self, x: np.ndarray, y: np.ndarray, t: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        length = self.x1 - self.x0
        # vortex centre advected with the free stream, wrapped to the nearest image
        xc = np.mod(x - self.mach * t - self.x0, length) + self.x0
        r2 = (xc / self.radius) ** 2 + (y / self.radius) ** 2
        bump = np.exp(-0.5 * r2)
        vx = self.mach * (1.0 - self.strength * y / self.radius * bump)
        vy = self.mach * self.strength * xc / self.radius * bump
        rho = (1.0 - 0.5 * (self.mach * self.strength) ** 2 * (self.gamma - 1.0) * np.exp(-r2)) ** (1.0 / (self.gamma - 1.0))
        p = rho**self.gamma / self.gamma
        return rho, np.stack([vx, vy], axis=-1), p

    def state(self, x: np.ndarray, y: np.ndarray, t: float = 0.0) -> np.ndarray:
        rho, v, p = self.primitive(x, y, t)
        return euler.conservative(rho, v, p, self.gamma)


def kelvin_helmholtz(x: np.ndarray, y: np.ndarray, gamma: float = euler.GAMMA) -> np.ndarray:
    """Shear layer on [-1, 1]^2."""
    beta = np.tanh(15.0 * y + 7.5) - np.tanh(15.0 * y - 7.5)
    rho = 0.5 + 0.75 * beta
    v = np.stack([0.5 * beta - 1.0, 0.1 * np.sin(2.0 * np.pi * x)], axis=-1)
    return euler.conservative(rho, v, np.ones_like(rho), gamma)
