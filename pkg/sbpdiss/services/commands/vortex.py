"""Isentropic vortex advected over one period: pressure, density and entropy errors per grid."""

from __future__ import annotations

from typing import Any

import numpy as np

from sbpdiss.cli.models import ExperimentResult
from sbpdiss.core.exceptions import ConfigValidationError
from sbpdiss.core.physics import euler
from sbpdiss.core.solver import fit_rate, integrate
from sbpdiss.services import factory
from sbpdiss.services.commands.base import BaseCommand

DEFAULT_FD_GRIDS = [30, 45, 60]
DEFAULT_SE_GRIDS = [8, 12, 16]
QUANTITIES = ("pressure", "density", "entropy")


def _quantities(u: np.ndarray, gamma: float) -> dict[str, np.ndarray]:
    rho, _, p = euler.primitive(u, gamma)
    return {"pressure": p, "density": rho, "entropy": euler.entropy_function(u, gamma)}


class VortexCommand(BaseCommand):
    command_code = "vortex"

    def grids(self) -> list[int]:
        if self.config.grids:
            return list(self.config.grids)
        return DEFAULT_SE_GRIDS if self.config.family.is_spectral else DEFAULT_FD_GRIDS

    def run(self) -> ExperimentResult:
        config = self.config
        if config.problem != "vortex":
            raise ConfigValidationError([{"field": "problem", "reason": "the vortex command runs the vortex problem"}])
        integrator = self.integrator()
        self.logger.banner(f"Isentropic vortex: {config.family} p={config.p} grids={self.grids()} t_final={integrator.t_final:g}")

        rows: list[dict[str, Any]] = []
        for size in self.grids():
            semidisc = factory.build_semidisc(config, size)
            grid = semidisc.grid
            u0 = factory.initial_state(config, grid)
            with self.logger.timed(f"size={size}"):
                trajectory = integrate(semidisc, u0, integrator, logger=self.logger)
            row: dict[str, Any] = {"size": size, "dofs": semidisc.size, "crash_time": trajectory.crash_time}
            if trajectory.crash is None:
                computed = _quantities(trajectory.state, config.gamma)
                reference = _quantities(factory.exact_state(config, grid, trajectory.t), config.gamma)
                for name in QUANTITIES:
                    row[f"{name}_error"] = float(np.sqrt(grid.integrate((computed[name] - reference[name]) ** 2)))
            self.logger.info(f"size={size}: {row}")
            rows.append(row)

        self.writer.write_csv("vortex.csv", rows)
        summary: dict[str, Any] = {"eps": self.eps, "t_final": integrator.t_final}
        complete = [row for row in rows if row["crash_time"] is None]
        for name in QUANTITIES:
            if len(complete) >= 2:
                summary[f"{name}_rate"], summary[f"{name}_fit_residual"] = fit_rate(
                    [row["size"] for row in complete], [row[f"{name}_error"] for row in complete]
                )
        return self.result(summary)
