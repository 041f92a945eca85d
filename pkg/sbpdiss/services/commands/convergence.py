"""Grid-convergence study against an exact solution."""

from __future__ import annotations

from sbpdiss.cli.models import ExperimentResult
from sbpdiss.core.exceptions import ConfigValidationError
from sbpdiss.core.solver import run_convergence
from sbpdiss.services import factory
from sbpdiss.services.commands.base import BaseCommand

DEFAULT_FD_GRIDS = [40, 60, 80, 120, 160]
DEFAULT_SE_GRIDS = [4, 8, 12, 16]


class ConvergenceCommand(BaseCommand):
    command_code = "convergence"

    def grids(self) -> list[int]:
        if self.config.grids:
            return list(self.config.grids)
        return DEFAULT_SE_GRIDS if self.config.family.is_spectral else DEFAULT_FD_GRIDS

    def run(self) -> ExperimentResult:
        config = self.config
        factory.check_problem(config)
        if config.problem not in ("gaussian", "sine", "density-wave", "vortex"):
            raise ConfigValidationError([{"field": "problem", "reason": f"{config.problem} has no exact solution"}])

        integrator = self.integrator()
        self.logger.info(
            f"Convergence of {config.pde}/{config.problem}: {config.family} p={config.p} s={config.s} "
            f"eps={self.eps:.6g} t_final={integrator.t_final:g} grids={self.grids()}"
        )
        report = run_convergence(
            factory=lambda size: factory.build_semidisc(config, size),
            grids=self.grids(),
            initial=lambda grid: factory.initial_state(config, grid),
            exact=lambda grid, t: factory.exact_state(config, grid, t),
            integrator=integrator,
            tolerance_check=config.tolerance_check,
            threads=config.threads,
            logger=self.logger,
        )
        self.writer.write_csv("convergence.csv", report.rows())
        return self.result({"eps": self.eps, "t_final": integrator.t_final, **report.summary()})
