"""Analytic continuations of non-smooth scalar functions.

Complex-step Jacobians evaluate the residual at ``u + i h e_j``. Absolute
values and maxima are continued by branching on the real part, so that
``|x| = sign(Re x) x`` stays holomorphic away from zero and the imaginary
part carries the exact directional derivative.
"""

from __future__ import annotations

import numpy as np


def cabs(x: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(x):
        return x * np.sign(x.real)
    return np.abs(x)


def cmax(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(np.real(a) >= np.real(b), a, b)


def positive_part(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x + cabs(x))


def negative_part(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x - cabs(x))


def field_dtype(*arrays: np.ndarray) -> np.dtype:
    """Float or complex, whichever the inputs need."""
    return np.result_type(float, *arrays)
