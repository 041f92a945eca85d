"""Jacobian eigenspectra with and without volume dissipation."""

from __future__ import annotations

from typing import Any

from sbpdiss.cli.models import DissipationVariant, ExperimentResult
from sbpdiss.core.semidisc import LinearConvection1D, SemiDiscretization, assemble_linear_operator
from sbpdiss.core.solver import SpectrumReport, spectrum_of
from sbpdiss.services import factory
from sbpdiss.services.commands.base import BaseCommand


class SpectraCommand(BaseCommand):
    command_code = "spectra"

    def _variants(self) -> list[DissipationVariant]:
        if self.config.family.is_spectral:
            return [DissipationVariant(include_B=False, include_Htilde=False, label="C=I")]
        if self.config.variants:
            return self.config.variants
        return [DissipationVariant(include_B=self.config.include_B, include_Htilde=self.config.include_Htilde)]

    def _spectrum(self, semidisc: SemiDiscretization) -> SpectrumReport:
        if isinstance(semidisc, LinearConvection1D):
            return spectrum_of(assemble_linear_operator(semidisc))
        u0 = factory.initial_state(self.config, semidisc.grid)
        return self.spectrum(semidisc, u0)

    def run(self) -> ExperimentResult:
        self.logger.info(f"Spectra of {self.config.pde} with {self.config.family} p={self.config.p}, s={self.config.s}")
        eigenvalue_rows: list[dict[str, Any]] = []
        summary_rows: list[dict[str, Any]] = []

        baseline = self._spectrum(factory.build_semidisc(self.config, eps=0.0))
        runs = [("baseline", 0.0, None, baseline)]
        for variant in self._variants():
            semidisc = factory.build_semidisc(
                self.config, include_B=variant.include_B, include_Htilde=variant.include_Htilde
            )
            runs.append((variant.name, self.eps, variant, self._spectrum(semidisc)))

        for name, eps, variant, report in runs:
            ratio = report.spectral_radius / baseline.spectral_radius
            self.logger.info(
                f"{name}: max Re = {report.max_real_part:.3e}, radius = {report.spectral_radius:.6g} ({ratio:.3f}x)"
            )
            summary_rows.append(
                {
                    "variant": name,
                    "eps": eps,
                    "include_B": None if variant is None else variant.include_B,
                    "include_Htilde": None if variant is None else variant.include_Htilde,
                    **report.summary(),
                    "radius_ratio": ratio,
                    "pairing_error": report.pairing_error,
                }
            )
            eigenvalue_rows.extend({"variant": name, "eps": eps, "lambda": value} for value in report.eigenvalues)

        self.writer.write_csv("spectra.csv", summary_rows)
        self.writer.write_csv("eigenvalues.csv", eigenvalue_rows)
        summary = {
            "eps": self.eps,
            "max_real_part": max(row["max_real_part"] for row in summary_rows[1:]),
            "baseline_spectral_radius": baseline.spectral_radius,
            "max_radius_ratio": max(row["radius_ratio"] for row in summary_rows[1:]),
        }
        return self.result(summary)
