"""Matrix dumps of one block operator and its volume dissipation."""

from __future__ import annotations

import numpy as np

from sbpdiss.cli.models import ExperimentResult
from sbpdiss.core.dissipation import build_dissipation
from sbpdiss.core.operators import check_sbp_operator
from sbpdiss.core.semidisc import Scheme
from sbpdiss.services import factory
from sbpdiss.services.commands.base import BaseCommand


class DumpOperatorCommand(BaseCommand):
    command_code = "dump-operator"

    def run(self) -> ExperimentResult:
        scheme = factory.resolve_defaults(self.config)[0]
        grid = factory.build_grid(self.config, scheme=scheme)
        op = grid.op
        self.logger.info(f"Dumping {op.dist.family} p={op.dist.p} operator with N={op.n}")

        self.writer.write_matrix("D.txt", op.D)
        self.writer.write_matrix("Q.txt", op.Q)
        self.writer.write_matrix("H.txt", op.H)
        self.writer.write_matrix("E.txt", op.E)
        self.writer.write_matrix("nodes.txt", op.physical_nodes()[None, :])
        if grid.upwind is not None:
            self.writer.write_matrix("D_plus.txt", grid.upwind.d_plus)
            self.writer.write_matrix("D_minus.txt", grid.upwind.d_minus)

        checks = check_sbp_operator(op)
        self.writer.write_csv(
            "operator_checks.csv",
            [{"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed} for c in checks],
        )
        failed = [check for check in checks if not check.passed]
        return self.result({"n": op.n, "element_size": op.element_size, "family": str(op.dist.family)}, failed)


class DumpDissipationCommand(BaseCommand):
    command_code = "dump-dissipation"

    def run(self) -> ExperimentResult:
        op = factory.build_grid(self.config, scheme=Scheme.CENTRAL).op
        # a zero strength would dump a zero matrix, so dump the unit-strength operator instead
        eps = self.eps or 1.0
        diss = build_dissipation(op, self.config.s, eps, self.config.include_B, self.config.include_Htilde)
        self.logger.info(
            f"Dumping A_D for s={diss.s}, eps={eps:.6g}, B={self.config.include_B}, H~={self.config.include_Htilde}"
        )

        dense = diss.matrix()
        self.writer.write_matrix("A_D.txt", dense)
        # times the node spacing: integer-valued for uniform FD blocks
        self.writer.write_matrix("A_D_times_dx.txt", dense * op.element_size)
        self.writer.write_matrix("Dtilde.txt", diss.diff.matrix)
        self.writer.write_matrix("B.txt", np.diag(diss.correction.diagonal))

        checks = diss.diff.checks()
        self.writer.write_csv(
            "dissipation_checks.csv",
            [{"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed} for c in checks],
        )
        failed = [check for check in checks if not check.passed]
        return self.result({"n": op.n, "s": diss.s, "eps": eps, "window_starts": list(diss.diff.window_starts)}, failed)
