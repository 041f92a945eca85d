"""Eigenspectra of semi-discretization Jacobians."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.linalg
from scipy.spatial import cKDTree

from sbpdiss.core.exceptions import DimensionMismatch, NoConvergence
from sbpdiss.core.solver.jacobian import JacobianMethod, jacobian

PAIRING_TOL = 1e-9
BACKWARD_ERROR_TOL = 1e-8


def _require_square(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"Eigenvalues need a square matrix, got shape {matrix.shape}")


def eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """All eigenvalues of a dense nonsymmetric matrix (LAPACK geev)."""
    matrix = np.asarray(matrix)
    _require_square(matrix)
    try:
        return scipy.linalg.eigvals(matrix, check_finite=True)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NoConvergence(f"Eigenvalue computation failed: {exc}") from exc


def backward_error(matrix: np.ndarray, samples: int | None = None, seed: int = 0) -> float:
    """max ||A v - lambda v|| / ||A|| over (a random subset of) unit eigenpairs."""
    _require_square(matrix)
    try:
        values, vectors = scipy.linalg.eig(matrix)
    except scipy.linalg.LinAlgError as exc:
        raise NoConvergence(f"Eigenvector computation failed: {exc}") from exc
    indices = np.arange(len(values))
    if samples is not None and samples < len(values):
        indices = np.random.default_rng(seed).choice(indices, size=samples, replace=False)
    vectors = vectors[:, indices] / np.linalg.norm(vectors[:, indices], axis=0)
    residual = matrix @ vectors - vectors * values[indices]
    scale = max(np.linalg.norm(matrix, 1), np.finfo(float).tiny)
    return float(np.max(np.linalg.norm(residual, axis=0)) / scale)


def conjugate_pairing_error(values: np.ndarray) -> float:
    """Largest distance from conj(lambda) to the nearest eigenvalue, relative to the spectral radius."""
    if values.size == 0:
        return 0.0
    points = np.column_stack([values.real, values.imag])
    distances, _ = cKDTree(points).query(np.column_stack([values.real, -values.imag]))
    return float(np.max(distances) / max(np.max(np.abs(values)), 1.0))


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    method: JacobianMethod | str

    @property
    def size(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def max_real_part(self) -> float:
        return float(np.max(self.eigenvalues.real))

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    @property
    def pairing_error(self) -> float:
        return conjugate_pairing_error(self.eigenvalues)

    def summary(self) -> dict[str, Any]:
        return {
            "size": self.size,
            "max_real_part": self.max_real_part,
            "spectral_radius": self.spectral_radius,
            "jacobian_method": str(self.method),
        }


def spectrum_of(matrix: np.ndarray, method: JacobianMethod | str = "assembled") -> SpectrumReport:
    return SpectrumReport(eigenvalues=eigenvalues(matrix), method=method)


def spectrum(
        semidisc: Any,
        u: np.ndarray,
        method: JacobianMethod | None = None,
        complex_step: float = 1e-30,
        fd_step: float = 1e-6,
        threads: int = 1,
) -> SpectrumReport:
    """Spectrum of the Jacobian of ``semidisc`` linearized about ``u``."""
    result = jacobian(semidisc, u, method, complex_step, fd_step, threads)
    return SpectrumReport(eigenvalues=eigenvalues(result.matrix), method=result.method)
