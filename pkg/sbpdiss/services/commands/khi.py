"""Small Kelvin-Helmholtz demo: survival time of the entropy scheme against the undissipated central scheme."""

from __future__ import annotations

from typing import Any

from sbpdiss.cli.models import ExperimentResult
from sbpdiss.core.exceptions import ConfigValidationError
from sbpdiss.core.semidisc import Scheme, SemiDiscretization
from sbpdiss.core.solver import TimeIntegrator, Trajectory, integrate
from sbpdiss.services import factory
from sbpdiss.services.commands.base import BaseCommand

MAX_NODES_PER_BLOCK = 64
DEFAULT_NODES = 32
DEFAULT_TOLERANCE = 1e-7


class KhiDemoCommand(BaseCommand):
    command_code = "khi-demo"

    def _validate(self) -> None:
        config = self.config
        if config.problem != "khi":
            raise ConfigValidationError([{"field": "problem", "reason": "khi-demo runs the khi problem"}])
        n = config.p + 1 if config.family.is_spectral else config.nodes or DEFAULT_NODES
        if n > MAX_NODES_PER_BLOCK:
            raise ConfigValidationError(
                [{"field": "N", "reason": f"khi-demo allows at most {MAX_NODES_PER_BLOCK} nodes per block, got {n}"}]
            )
        if config.nodes is None and not config.family.is_spectral:
            self.config = config.model_copy(update={"nodes": DEFAULT_NODES})

    def _run(self, label: str, semidisc: SemiDiscretization, integrator: TimeIntegrator) -> Trajectory:
        u0 = factory.initial_state(self.config, semidisc.grid)
        sample_times = [integrator.t_final * k / self.config.outputs for k in range(1, self.config.outputs + 1)]

        def observe(t: float, u) -> dict[str, Any]:
            return {"run": label, **semidisc.evaluate_functionals(u).as_dict()}

        self.logger.info(f"{label}: {semidisc.scheme} {semidisc.sat}, dofs={semidisc.size}")
        trajectory = integrate(semidisc, u0, integrator, sample_times=sample_times, observer=observe, logger=self.logger)
        if trajectory.crashed:
            self.logger.warning(f"{label} crashed at t={trajectory.crash_time:.6g}: {trajectory.crash.cause}")
        else:
            self.logger.info(f"{label} reached t={trajectory.t:.6g}")
        return trajectory

    def run(self) -> ExperimentResult:
        self._validate()
        config = self.config
        integrator = self.integrator()
        if config.integrator.rtol is None and config.integrator.atol is None:
            integrator = integrator.model_copy(update={"rtol": DEFAULT_TOLERANCE, "atol": DEFAULT_TOLERANCE})
        self.logger.banner(f"KHI demo: {config.family} p={config.p} N={config.nodes} blocks={config.blocks} eps={self.eps:.6g}")

        semidisc = factory.build_semidisc(config)
        trajectory = self._run("dissipative", semidisc, integrator)
        records = list(trajectory.records)

        entropies = [row["entropy"] for row in trajectory.records]
        slack = integrator.rtol * max(1.0, abs(entropies[0])) if entropies else 0.0
        increases = [later - earlier for earlier, later in zip(entropies, entropies[1:])]
        summary: dict[str, Any] = {
            "eps": self.eps,
            "t_final": integrator.t_final,
            "crash_time": trajectory.crash_time,
            "t_reached": trajectory.t,
            "max_entropy_increase": max(increases, default=0.0),
            "entropy_non_increasing": all(increase <= slack for increase in increases),
        }

        if config.compare_baseline is not False:
            baseline = self._run("baseline", factory.build_semidisc(config, eps=0.0, scheme=Scheme.CENTRAL), integrator)
            records.extend(baseline.records)
            summary["baseline_crash_time"] = baseline.crash_time
            summary["baseline_t_reached"] = baseline.t
            summary["survival_ratio"] = trajectory.t / baseline.t if baseline.t > 0.0 else None

        self.writer.write_csv("khi_history.csv", records)
        return self.result(summary)
