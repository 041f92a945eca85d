"""Dense Jacobians of a semi-discretization by complex step or central differences."""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from sbpdiss._compat import StrEnum
from typing import Any, Callable

import numpy as np

from sbpdiss.core.logger import get_logger

logger = get_logger(__name__)

COMPLEX_STEP = 1e-30
FD_STEP = 1e-6


class JacobianMethod(StrEnum):
    COMPLEX_STEP = "complex-step"
    CENTRAL_DIFFERENCE = "central-difference"


@dataclass(frozen=True)
class JacobianResult:
    matrix: np.ndarray
    method: JacobianMethod


def _columns(column: Callable[[int], np.ndarray], size: int, threads: int) -> np.ndarray:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            # map keeps column order, so assembly is deterministic
            return np.stack(list(pool.map(column, range(size))), axis=1)
    return np.stack([column(j) for j in range(size)], axis=1)


def complex_step_jacobian(rhs: Callable[..., np.ndarray], u: np.ndarray, h: float = COMPLEX_STEP, threads: int = 1) -> np.ndarray:
    """Column j is Im R(u + i h e_j) / h."""
    shape = u.shape
    base = np.asarray(u, dtype=complex).ravel()

    def column(j: int) -> np.ndarray:
        perturbed = base.copy()
        perturbed[j] += 1j * h
        return np.imag(np.asarray(rhs(perturbed.reshape(shape)))).ravel() / h

    return _columns(column, base.size, threads)


def central_difference_jacobian(rhs: Callable[..., np.ndarray], u: np.ndarray, step: float = FD_STEP, threads: int = 1) -> np.ndarray:
    """Column j is (R(u + h_j e_j) - R(u - h_j e_j)) / 2h_j with h_j = step * max(1, |u_j|)."""
    shape = u.shape
    base = np.asarray(u, dtype=float).ravel()

    def column(j: int) -> np.ndarray:
        h = step * max(1.0, abs(base[j]))
        plus, minus = base.copy(), base.copy()
        plus[j] += h
        minus[j] -= h
        return (np.asarray(rhs(plus.reshape(shape))) - np.asarray(rhs(minus.reshape(shape)))).ravel() / (2.0 * h)

    return _columns(column, base.size, threads)


def _supports_complex(rhs: Callable[..., np.ndarray], u: np.ndarray, h: float) -> bool:
    perturbed = np.asarray(u, dtype=complex).copy()
    perturbed.flat[0] += 1j * h
    with warnings.catch_warnings():
        warnings.simplefilter("error", np.exceptions.ComplexWarning)
        try:
            result = np.asarray(rhs(perturbed))
        except (TypeError, np.exceptions.ComplexWarning) as exc:
            logger.warning(f"Right-hand side is not complex-capable ({exc}); using central differences")
            return False
    if not np.iscomplexobj(result):
        logger.warning("Right-hand side dropped the imaginary part; using central differences")
        return False
    return True


def jacobian(
        semidisc: Any,
        u: np.ndarray,
        method: JacobianMethod | None = None,
        complex_step: float = COMPLEX_STEP,
        fd_step: float = FD_STEP,
        threads: int = 1,
) -> JacobianResult:
    """Jacobian of ``semidisc.rhs`` (or of a plain callable) at ``u``.

    The complex step is used whenever the right-hand side accepts complex
    states; otherwise central differences are used and the result is tagged.
    """
    rhs = getattr(semidisc, "rhs", semidisc)
    if method is None:
        method = JacobianMethod.COMPLEX_STEP if _supports_complex(rhs, u, complex_step) else JacobianMethod.CENTRAL_DIFFERENCE
    if method is JacobianMethod.COMPLEX_STEP:
        matrix = complex_step_jacobian(rhs, u, complex_step, threads)
    else:
        matrix = central_difference_jacobian(rhs, u, fd_step, threads)
    return JacobianResult(matrix=matrix, method=method)
