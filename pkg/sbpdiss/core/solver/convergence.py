"""Grid-convergence studies: H-norm errors and least-squares rates."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from sbpdiss.core.exceptions import ConfigValidationError
from sbpdiss.core.logger import Logger, get_logger
from sbpdiss.core.semidisc import SemiDiscretization
from sbpdiss.core.solver.integrators import TimeIntegrator, integrate

ROUND_OFF_FLOOR = 1e-12
MIN_GRIDS = 3


def h_norm_error(grid: Any, u: np.ndarray, exact: np.ndarray) -> float:
    """sqrt((u - U)^T H (u - U)), summed over components for systems."""
    difference = np.real(u - exact) ** 2
    if difference.ndim > len(grid.shape):
        difference = np.sum(difference, axis=tuple(range(len(grid.shape), difference.ndim)))
    return float(np.sqrt(grid.integrate(difference)))


def fit_rate(sizes: Sequence[float], errors: Sequence[float]) -> tuple[float, float]:
    """Slope and RMS residual of log(error) = c - rate log(size)."""
    log_n, log_e = np.log(np.asarray(sizes, dtype=float)), np.log(np.asarray(errors, dtype=float))
    coefficients, residuals, *_ = np.polyfit(log_n, log_e, 1, full=True)
    residual = math.sqrt(float(residuals[0]) / len(sizes)) if len(residuals) else 0.0
    return -float(coefficients[0]), residual


@dataclass
class ConvergenceLevel:
    size: int
    dofs: int
    error: float
    crash_time: float | None = None


@dataclass
class ConvergenceReport:
    levels: list[ConvergenceLevel]
    rate: float | None = None
    residual: float | None = None
    temporal_headroom: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def sizes(self) -> list[int]:
        return [level.size for level in self.levels]

    @property
    def errors(self) -> list[float]:
        return [level.error for level in self.levels]

    @property
    def fit_skipped(self) -> bool:
        return self.rate is None

    def rows(self) -> list[dict[str, Any]]:
        rows = []
        for previous, level in zip([None, *self.levels], self.levels):
            local = None
            if previous is not None and previous.error > 0 and level.error > 0:
                local = -math.log(level.error / previous.error) / math.log(level.size / previous.size)
            rows.append(
                {
                    "size": level.size,
                    "dofs": level.dofs,
                    "error": level.error,
                    "local_rate": local,
                    "crash_time": level.crash_time,
                }
            )
        return rows

    def summary(self) -> dict[str, Any]:
        return {
            "rate": self.rate,
            "fit_residual": self.residual,
            "fit_skipped": self.fit_skipped,
            "temporal_headroom": self.temporal_headroom,
            **self.extra,
        }


def report_from_errors(levels: list[ConvergenceLevel]) -> ConvergenceReport:
    """Fit a rate unless every error is at round-off or a level crashed."""
    report = ConvergenceReport(levels=levels)
    errors = np.array([level.error for level in levels])
    if any(level.crash_time is not None for level in levels) or not np.all(np.isfinite(errors)):
        return report
    if np.all(errors <= ROUND_OFF_FLOOR):
        return report
    report.rate, report.residual = fit_rate([level.size for level in levels], errors)
    return report


def run_convergence(
        factory: Callable[[int], SemiDiscretization],
        grids: Sequence[int],
        initial: Callable[[Any], np.ndarray],
        exact: Callable[[Any, float], np.ndarray],
        integrator: TimeIntegrator,
        tolerance_check: bool = False,
        threads: int = 1,
        logger: Logger | None = None,
) -> ConvergenceReport:
    """Integrate on each grid size and fit the rate of the H-norm error at t_final.

    ``factory(size)`` builds the semi-discretization, ``initial(grid)`` its
    initial state and ``exact(grid, t)`` the reference solution. With
    ``tolerance_check`` the finest grid is repeated at half the tolerances
    and the change in its error is reported as the temporal headroom.
    """
    logger = logger or get_logger(__name__)
    if len(grids) < MIN_GRIDS:
        raise ConfigValidationError([{"field": "grids", "reason": f"need at least {MIN_GRIDS} grids, got {len(grids)}"}])
    grids = sorted(grids)

    def solve(size: int, stepper: TimeIntegrator = integrator) -> ConvergenceLevel:
        semidisc = factory(size)
        with logger.timed(f"size={size}"):
            trajectory = integrate(semidisc, initial(semidisc.grid), stepper, logger=logger)
        error = h_norm_error(semidisc.grid, trajectory.state, exact(semidisc.grid, trajectory.t))
        logger.info(f"size={size} dofs={semidisc.size} error={error:.6e} steps={trajectory.accepted}")
        return ConvergenceLevel(size=size, dofs=semidisc.size, error=error, crash_time=trajectory.crash_time)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            levels = list(pool.map(solve, grids))
    else:
        levels = [solve(size) for size in grids]

    report = report_from_errors(levels)
    if tolerance_check:
        finest = solve(grids[-1], integrator.halved())
        report.temporal_headroom = abs(finest.error - levels[-1].error)
        logger.info(f"Halving tolerances changes the finest error by {report.temporal_headroom:.3e}")
    if report.rate is None:
        logger.info("Errors at round-off or a level crashed; rate fit skipped")
    else:
        logger.info(f"Fitted rate {report.rate:.3f} (residual {report.residual:.2e})")
    return report
