"""One-dimensional time-dependent runs with functional and local-stability histories."""

from __future__ import annotations

from typing import Any

import numpy as np

from sbpdiss.cli.models import ExperimentResult
from sbpdiss.core.exceptions import ConfigValidationError, NonAdmissibleState
from sbpdiss.core.semidisc import SemiDiscretization
from sbpdiss.core.solver import h_norm_error, integrate
from sbpdiss.services import factory
from sbpdiss.services.commands.base import BaseCommand

TIME_MATCH = 1e-12


class Run1DCommand(BaseCommand):
    command_code = "run1d"

    def _sample_times(self, t_final: float, count: int) -> list[float]:
        return [t_final * k / count for k in range(1, count + 1)]

    def _observer(self, semidisc: SemiDiscretization, jacobian_times: list[float]):
        def observe(t: float, u: np.ndarray) -> dict[str, Any]:
            row: dict[str, Any] = semidisc.evaluate_functionals(u).as_dict()
            if any(abs(t - sample) <= TIME_MATCH * max(1.0, sample) for sample in jacobian_times):
                report = self.spectrum(semidisc, u)
                row.update({"max_real_part": report.max_real_part, "spectral_radius": report.spectral_radius})
                self.logger.info(f"t={t:.6g}: max Re = {report.max_real_part:.3e}")
            return row

        return observe

    def _jacobian_grid_study(self) -> list[dict[str, Any]]:
        rows = []
        for size in self.config.jacobian_grids or []:
            semidisc = factory.build_semidisc(self.config, size)
            u0 = factory.initial_state(self.config, semidisc.grid)
            report = self.spectrum(semidisc, u0)
            self.logger.info(f"size={size}: initial max Re = {report.max_real_part:.3e}")
            rows.append({"size": size, "dofs": semidisc.size, **report.summary()})
        return rows

    def run(self) -> ExperimentResult:
        config = self.config
        if config.pde == "euler-2d":
            raise ConfigValidationError([{"field": "pde", "reason": "run1d needs a one-dimensional PDE"}])
        semidisc = factory.build_semidisc(config)
        u0 = factory.initial_state(config, semidisc.grid)
        integrator = self.integrator()
        t_final = integrator.t_final

        jacobian_times = [0.0, *self._sample_times(t_final, config.jacobian_samples)] if config.jacobian_samples else []
        sample_times = sorted(set(self._sample_times(t_final, config.outputs)) | set(jacobian_times))

        self.logger.banner(
            f"run1d: {config.pde}/{config.problem} {semidisc.scheme} {semidisc.sat} eps={self.eps:.6g}",
            f"dofs={semidisc.size} t_final={t_final:g} method={integrator.method}",
        )

        trajectory = integrate(
            semidisc,
            u0,
            integrator,
            sample_times=sample_times,
            observer=self._observer(semidisc, jacobian_times),
            logger=self.logger,
        )
        self.writer.write_csv("history.csv", trajectory.records)

        summary: dict[str, Any] = {
            "eps": self.eps,
            "t_final": t_final,
            "t_reached": trajectory.t,
            "crash_time": trajectory.crash_time,
            "crash_cause": None if trajectory.crash is None else trajectory.crash.cause,
            "accepted_steps": trajectory.accepted,
            "rejected_steps": trajectory.rejected,
        }
        energies = [row["energy"] for row in trajectory.records]
        entropies = [row["entropy"] for row in trajectory.records]
        summary["energy_change"] = energies[-1] - energies[0]
        summary["max_energy_increase"] = float(max(np.diff(energies), default=0.0))
        summary["max_entropy_increase"] = float(max(np.diff(entropies), default=0.0))
        max_re = [row["max_real_part"] for row in trajectory.records if "max_real_part" in row]
        if max_re:
            summary["max_real_part"] = max(max_re)

        exact = factory.exact_state(config, semidisc.grid, trajectory.t)
        if exact is not None:
            summary["error"] = h_norm_error(semidisc.grid, trajectory.state, exact)

        if config.tolerance_check and trajectory.crash is None and exact is not None:
            halved = integrate(semidisc, u0, integrator.halved(), logger=self.logger)
            summary["temporal_headroom"] = abs(
                h_norm_error(semidisc.grid, halved.state, exact) - summary["error"]
            )

        grid_rows = self._jacobian_grid_study()
        if grid_rows:
            self.writer.write_csv("jacobian_grids.csv", grid_rows)
            summary["jacobian_grids"] = {row["size"]: row["max_real_part"] for row in grid_rows}

        if config.compare_baseline and self.eps:
            summary.update(self._baseline(u0))
        return self.result(summary)

    def _baseline(self, u0: np.ndarray) -> dict[str, Any]:
        """Same run without volume dissipation."""
        semidisc = factory.build_semidisc(self.config, eps=0.0)
        jacobian_times = self._sample_times(self.integrator().t_final, self.config.jacobian_samples)
        try:
            trajectory = integrate(
                semidisc,
                u0,
                self.integrator(),
                sample_times=jacobian_times,
                observer=self._observer(semidisc, [0.0, *jacobian_times]),
                logger=self.logger,
            )
        except NonAdmissibleState as exc:
            return {"baseline_error": str(exc)}
        self.writer.write_csv("history_baseline.csv", trajectory.records)
        max_re = [row["max_real_part"] for row in trajectory.records if "max_real_part" in row]
        return {
            "baseline_crash_time": trajectory.crash_time,
            "baseline_max_real_part": max(max_re) if max_re else None,
        }
