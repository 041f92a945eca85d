from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

import numpy as np

from sbpdiss.cli.models import ExperimentConfig, ExperimentResult
from sbpdiss.core.logger import Logger, get_logger
from sbpdiss.core.operators import InvariantCheck
from sbpdiss.core.settings import AppSettings
from sbpdiss.core.solver import SpectrumReport, TimeIntegrator, spectrum
from sbpdiss.core.semidisc import SemiDiscretization
from sbpdiss.services import factory
from sbpdiss.utils.output_writer import OutputWriter


class BaseCommand(ABC):
    command_code: str = ""

    def __init__(
            self,
            config: ExperimentConfig,
            settings: AppSettings,
            writer: OutputWriter,
            logger: Logger | None = None,
    ):
        self.config = config
        self.settings = settings
        self.writer = writer
        self.logger = logger or get_logger(self.__class__.__name__)

    @abstractmethod
    def run(self) -> ExperimentResult:
        """Execute the experiment and write its tables."""
        pass

    @property
    def seed(self) -> int:
        return self.config.seed if self.config.seed is not None else self.settings.verify.seed

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    @property
    def eps(self) -> float:
        return self.config.eps_resolved or 0.0

    def integrator(self, t_final: float | None = None) -> TimeIntegrator:
        return factory.time_integrator(self.config, self.settings.solver, t_final)

    def spectrum(self, semidisc: SemiDiscretization, u: np.ndarray) -> SpectrumReport:
        solver = self.settings.solver
        return spectrum(semidisc, u, None, solver.complex_step, solver.fd_step, self.config.threads)

    def result(self, summary: dict[str, Any], failed: list[InvariantCheck] | None = None) -> ExperimentResult:
        if failed:
            return ExperimentResult(
                command=self.config.command,
                status="failed",
                exit_code=3,
                summary=summary,
                error={
                    "error": "InvariantViolation",
                    "message": f"{len(failed)} invariant(s) failed",
                    "failed": [check.name for check in failed],
                    "exit_code": 3,
                },
            )
        return ExperimentResult(command=self.config.command, summary=summary)
