"""The invariant suite: operators, dissipation, semi-discretizations and the integrator.

Every check yields an :class:`InvariantCheck`; the command fails with exit
code 3 when any residual exceeds its tolerance.
"""

from __future__ import annotations

import math
from typing import Any, Iterator

import numpy as np
import scipy.linalg

from sbpdiss.cli.models import ExperimentResult
from sbpdiss.core.dissipation import (
    CoefficientMode,
    apply_dissipation_2d,
    assemble_scalar_dissipation,
    build_dissipation,
    build_system_blocks,
    build_undivided_diff,
    conservation_check,
    dissipativity_check,
    random_coefficient,
    random_euler_states,
    se_rank_checks,
    symmetry_check,
)
from sbpdiss.core.operators import (
    Family,
    InvariantCheck,
    build_block_operator,
    build_upwind_pu2_block,
    check_sbp_operator,
    minimum_csbp_nodes,
)
from sbpdiss.core.physics import euler
from sbpdiss.core.semidisc import (
    Burgers1D,
    Euler1D,
    Euler2D,
    LinearConvection1D,
    SatKind,
    Scheme,
    assemble_linear_operator,
    build_grid_1d,
    build_grid_2d,
    upwind_dissipation_energy,
)
from sbpdiss.core.solver import TimeIntegrator, integrate, jacobian
from sbpdiss.services.commands.base import BaseCommand

MATRIX_TOL = 1e-13
UPWIND_TOL = 1e-12
SEMIDISC_TOL = 1e-11
FREE_STREAM_TOL = 1e-12
JACOBIAN_TOL = 1e-10
INTEGRATOR_TOL = 1e-8
NON_SYMMETRIC_REASON = "MatrixBlock coefficient X|Lambda|X^-1 is not symmetric, so no sign is guaranteed"

# (row, first column, entries) of A_D * dx for CSBP p = 1, s = 2, eps = 1
GOLDEN_WITH_B = (
    (0, 0, (-2.0, 4.0, -2.0)),
    (1, 0, (2.0, -5.0, 4.0, -1.0)),
    (2, 0, (-1.0, 4.0, -6.0, 4.0, -1.0)),
)
GOLDEN_WITHOUT_B = (
    (0, 0, (-4.0, 8.0, -4.0)),
    (1, 0, (4.0, -9.0, 6.0, -1.0)),
    (2, 0, (-2.0, 6.0, -7.0, 4.0, -1.0)),
    (3, 1, (-1.0, 4.0, -6.0, 4.0, -1.0)),
)
COUNTEREXAMPLE_VALUE = 0.185
COUNTEREXAMPLE_TOL = 0.005

SYSTEM_MODES = (
    CoefficientMode.SCALAR_BLOCK,
    CoefficientMode.MATRIX_BLOCK,
    CoefficientMode.SCALAR_MATRIX_BLOCK,
    CoefficientMode.MATRIX_MATRIX_BLOCK,
)
MAX_2D_SAMPLES = 200


def _relative(value: float, scale: float) -> float:
    return abs(value) / max(scale, np.finfo(float).tiny)


def operator_checks() -> Iterator[InvariantCheck]:
    for p in range(1, 5):
        yield from check_sbp_operator(build_block_operator(Family.CSBP, p, minimum_csbp_nodes(p) + 4, 1.0))
    for family in (Family.LGL, Family.LG):
        for p in range(1, 7):
            yield from check_sbp_operator(build_block_operator(family, p, None, 1.0))


def upwind_checks() -> Iterator[InvariantCheck]:
    upwind = build_upwind_pu2_block()
    S = upwind.S
    yield InvariantCheck("upwind:S-symmetric", float(np.max(np.abs(S - S.T))), UPWIND_TOL)
    smallest = float(np.min(scipy.linalg.eigvalsh(0.5 * (S + S.T))))
    yield InvariantCheck("upwind:S-psd", max(0.0, -smallest), UPWIND_TOL)
    boundary = np.zeros((upwind.n, upwind.n))
    boundary[0, 0], boundary[-1, -1] = -1.0, 1.0
    q_plus = upwind.h[:, None] * upwind.d_plus
    q_minus = upwind.h[:, None] * upwind.d_minus
    yield InvariantCheck("upwind:sbp", float(np.max(np.abs(q_plus + q_minus.T - boundary))), UPWIND_TOL)

    x = upwind.block_length * np.linspace(0.0, 1.0, upwind.n)
    value = upwind_dissipation_energy(upwind, 2.0 + 6.0 * x - x**2)
    yield InvariantCheck("upwind:antidissipative-counterexample", abs(value - COUNTEREXAMPLE_VALUE), COUNTEREXAMPLE_TOL)


def undivided_checks() -> Iterator[InvariantCheck]:
    for p in range(1, 5):
        op = build_block_operator(Family.CSBP, p, minimum_csbp_nodes(p) + 4, 1.0)
        for s in range(1, p + 2):
            yield from build_undivided_diff(op.dist, s).checks()
    for p in range(2, 7):
        yield from build_undivided_diff(build_block_operator(Family.LGL, p, None, 1.0).dist, p).checks()


def golden_checks() -> Iterator[InvariantCheck]:
    # unit spacing, so the assembled matrix is already A_D * dx
    op = build_block_operator(Family.CSBP, 1, 12, 11.0)
    for include_B, rows in ((True, GOLDEN_WITH_B), (False, GOLDEN_WITHOUT_B)):
        dense = build_dissipation(op, 2, 1.0, include_B=include_B).matrix() * op.element_size
        residual = 0.0
        for row, start, entries in rows:
            expected = np.zeros(op.n)
            expected[start:start + len(entries)] = entries
            residual = max(residual, float(np.max(np.abs(dense[row] - expected))))
            # mirror image at the right boundary
            residual = max(residual, float(np.max(np.abs(dense[-1 - row, ::-1] - expected))))
        yield InvariantCheck(f"golden:s2-B{int(include_B)}", residual, MATRIX_TOL)


def half_node_checks(rng: np.random.Generator, vectors: int = 5) -> Iterator[InvariantCheck]:
    """s = 1 with half-node means c_i = (a_{i-1} + a_i)/2 is the tridiagonal flux-difference form."""
    op = build_block_operator(Family.CSBP, 1, 8, 7.0)
    n = op.n
    residual = 0.0
    for _ in range(vectors):
        a = rng.uniform(0.1, 2.0, n)
        dense = assemble_scalar_dissipation(op, 1, 1.0, coeff=a).matrix() * op.element_size
        c = np.zeros(n)
        c[1:] = 0.5 * (a[:-1] + a[1:])
        expected = np.zeros((n, n))
        expected[0, :2] = (-2.0 * c[1], 2.0 * c[1])
        for i in range(1, n - 1):
            expected[i, i - 1:i + 2] = (c[i], -(c[i] + c[i + 1]), c[i + 1])
        expected[-1, -2:] = (2.0 * c[-1], -2.0 * c[-1])
        residual = max(residual, float(np.max(np.abs(dense - expected))))
    yield InvariantCheck("golden:s1-half-node", residual, MATRIX_TOL)


def scalar_dissipation_checks(rng: np.random.Generator, samples: int) -> Iterator[InvariantCheck]:
    for p in range(1, 5):
        op = build_block_operator(Family.CSBP, p, minimum_csbp_nodes(p) + 6, 1.0)
        for include_B in (True, False):
            for include_Htilde in (False, True):
                diss = build_dissipation(op, p + 1, 1.0, include_B, include_Htilde)
                label = f"dissipation:CSBP-p{p}-s{p + 1}-B{int(include_B)}-H{int(include_Htilde)}"
                coefficient = random_coefficient(diss, rng, CoefficientMode.NODAL_SCALAR)
                yield conservation_check(diss, rng, samples, coefficient, label=label)
                yield dissipativity_check(diss, rng, samples, coefficient, label=label)
                yield symmetry_check(diss, label=label)
    for p in range(2, 7):
        op = build_block_operator(Family.LGL, p, None, 1.0)
        diss = build_dissipation(op, p, 1.0, include_B=False)
        yield conservation_check(diss, rng, samples, label=f"dissipation:LGL-p{p}")
        yield dissipativity_check(diss, rng, samples, label=f"dissipation:LGL-p{p}")


def euler_dissipation_checks(rng: np.random.Generator, samples: int) -> Iterator[InvariantCheck]:
    for p in (2, 3):
        op = build_block_operator(Family.CSBP, p, minimum_csbp_nodes(p) + 4, 1.0)
        for mode in SYSTEM_MODES:
            diss = build_dissipation(op, p + 1, 1.0, mode=mode)
            coefficient = random_coefficient(diss, rng, mode)
            label = f"dissipation:euler-1d-p{p}-{mode}"
            yield conservation_check(diss, rng, samples, coefficient, components=3, label=label)
            if mode.symmetric:
                yield dissipativity_check(diss, rng, samples, coefficient, components=3, label=label)
            else:
                yield InvariantCheck.skipped(f"{label}:dissipativity", NON_SYMMETRIC_REASON)

    op = build_block_operator(Family.CSBP, 2, 10, 1.0)
    weights = np.outer(op.h, op.h)[None, :, :, None]
    count = min(samples, MAX_2D_SAMPLES)
    for mode in SYSTEM_MODES:
        diss = build_dissipation(op, 3, 1.0, mode=mode)
        u = random_euler_states(rng, op.n * op.n, dim=2).reshape(op.n, op.n, 4)
        for direction in (0, 1):
            coefficient = build_system_blocks(u, mode, diss.half_nodes, direction, axis=-3 + direction)
            q = rng.standard_normal((count, op.n, op.n, 4))
            r = apply_dissipation_2d(direction, op, op, diss, 1.0, q, coefficient)
            label = f"dissipation:euler-2d-{mode}-dir{direction}"
            totals = np.abs(np.sum(weights * r, axis=(1, 2)))
            scale = np.sum(weights * np.abs(r), axis=(1, 2))
            yield InvariantCheck(
                f"{label}:conservation", float(np.max(totals / np.maximum(scale, np.finfo(float).tiny))), SEMIDISC_TOL
            )
            if mode.symmetric:
                quadratic = np.sum(weights * q * r, axis=(1, 2, 3))
                scale = np.sum(weights * np.abs(q * r), axis=(1, 2, 3))
                residual = float(max(0.0, np.max(quadratic / np.maximum(scale, np.finfo(float).tiny))))
                yield InvariantCheck(f"{label}:dissipativity", residual, SEMIDISC_TOL)
            else:
                yield InvariantCheck.skipped(f"{label}:dissipativity", NON_SYMMETRIC_REASON)


def spectral_element_checks() -> Iterator[InvariantCheck]:
    for family in (Family.LGL, Family.LG):
        for p in range(2, 7):
            yield from se_rank_checks(family, p, label=f"se:{family}-p{p}")


def linear_convection_checks(rng: np.random.Generator) -> Iterator[InvariantCheck]:
    grid = build_grid_1d(Family.CSBP, 3, 20, 2, 0.0, 1.0)
    symmetric = LinearConvection1D(grid, sat=SatKind.SYMMETRIC)
    weighted = grid.weights.ravel()[:, None] * assemble_linear_operator(symmetric)
    skew = float(np.max(np.abs(weighted + weighted.T))) / float(np.max(np.abs(weighted)))
    yield InvariantCheck("convection:skew-adjoint", skew, SEMIDISC_TOL)

    dissipative = LinearConvection1D(grid, sat=SatKind.LAX_FRIEDRICHS, dissipation=build_dissipation(grid.op, 4, 0.005))
    assembled = assemble_linear_operator(dissipative)
    u = rng.standard_normal(dissipative.state_shape)
    computed = jacobian(dissipative, u).matrix
    difference = float(np.max(np.abs(computed - assembled))) / float(np.max(np.abs(assembled)))
    yield InvariantCheck("convection:jacobian-matches-operator", difference, JACOBIAN_TOL)

    r = dissipative.rhs(u)
    total = float(grid.integrate(r))
    yield InvariantCheck("convection:conservation", _relative(total, float(grid.integrate(np.abs(r)))), SEMIDISC_TOL)


def burgers_checks(rng: np.random.Generator) -> Iterator[InvariantCheck]:
    grid = build_grid_1d(Family.CSBP, 2, 20, 2, 0.0, 1.0)
    u = 1.5 + rng.uniform(-0.5, 0.5, grid.shape)

    conservative = Burgers1D(grid, sat=SatKind.SYMMETRIC)
    r = conservative.rhs(u)
    energy = float(grid.integrate(u * r))
    yield InvariantCheck("burgers:energy-conservative", _relative(energy, float(grid.integrate(np.abs(u * r)))), SEMIDISC_TOL)

    dissipative = Burgers1D(grid, sat=SatKind.RUSANOV, dissipation=build_dissipation(grid.op, 3, 0.02))
    r = dissipative.rhs(u)
    total = float(grid.integrate(r))
    yield InvariantCheck("burgers:conservation", _relative(total, float(grid.integrate(np.abs(r)))), SEMIDISC_TOL)
    energy = float(grid.integrate(u * r))
    yield InvariantCheck("burgers:energy-stable", max(0.0, energy) / float(grid.integrate(np.abs(u * r))), SEMIDISC_TOL)


def _entropy_rate(semidisc, grid, u: np.ndarray) -> tuple[float, float]:
    r = semidisc.rhs(u)
    w = semidisc.entropy_variables(u)
    return float(grid.integrate(np.sum(w * r, axis=-1))), float(grid.integrate(np.sum(np.abs(w * r), axis=-1)))


def euler_checks(rng: np.random.Generator) -> Iterator[InvariantCheck]:
    grid = build_grid_1d(Family.CSBP, 2, 16, 2, 0.0, 1.0)
    u = random_euler_states(rng, grid.dofs).reshape(grid.shape + (3,))

    conservative = Euler1D(grid, scheme=Scheme.HADAMARD_ENTROPY_STABLE, sat=SatKind.SYMMETRIC)
    rate, scale = _entropy_rate(conservative, grid, u)
    yield InvariantCheck("euler-1d:entropy-conservative", _relative(rate, scale), SEMIDISC_TOL)

    dissipation = build_dissipation(grid.op, 3, 0.01, mode=CoefficientMode.MATRIX_MATRIX_BLOCK)
    stable = Euler1D(grid, sat=SatKind.ENTROPY_DISSIPATIVE_MATRIX, dissipation=dissipation)
    rate, scale = _entropy_rate(stable, grid, u)
    yield InvariantCheck("euler-1d:entropy-stable", max(0.0, rate) / scale, SEMIDISC_TOL)
    r = stable.rhs(u)
    totals = np.abs(grid.integrate(r)) / grid.integrate(np.abs(r))
    yield InvariantCheck("euler-1d:conservation", float(np.max(totals)), SEMIDISC_TOL)

    grid_2d = build_grid_2d(Family.CSBP, 2, 10, 2, -1.0, 1.0, -1.0, 1.0)
    u = random_euler_states(rng, grid_2d.dofs, dim=2).reshape(grid_2d.shape + (4,))
    conservative_2d = Euler2D(grid_2d, scheme=Scheme.HADAMARD_ENTROPY_STABLE, sat=SatKind.SYMMETRIC)
    rate, scale = _entropy_rate(conservative_2d, grid_2d, u)
    yield InvariantCheck("euler-2d:entropy-conservative", _relative(rate, scale), SEMIDISC_TOL)

    constant = np.broadcast_to(euler.conservative(1.0, np.array([0.3, -0.2]), 1.0), grid_2d.shape + (4,)).copy()
    for scheme, sat, mode in (
        (Scheme.CENTRAL, SatKind.ROE_MATRIX, CoefficientMode.MATRIX_BLOCK),
        (Scheme.HADAMARD_ENTROPY_STABLE, SatKind.ENTROPY_DISSIPATIVE_MATRIX, CoefficientMode.MATRIX_MATRIX_BLOCK),
    ):
        semidisc = Euler2D(grid_2d, scheme=scheme, sat=sat, dissipation=build_dissipation(grid_2d.op, 3, 0.01, mode=mode))
        residual = float(np.max(np.abs(semidisc.rhs(constant))))
        yield InvariantCheck(f"euler-2d:free-stream-{scheme}", residual, FREE_STREAM_TOL)


def integrator_checks() -> Iterator[InvariantCheck]:
    trajectory = integrate(lambda u, t: -u, np.ones(1), TimeIntegrator(t_final=1.0, rtol=1e-10, atol=1e-12))
    yield InvariantCheck("integrator:exponential-decay", abs(float(trajectory.state[0]) - math.exp(-1.0)), INTEGRATOR_TOL)


class VerifyCommand(BaseCommand):
    command_code = "verify"

    @property
    def samples(self) -> int:
        return self.config.samples or self.settings.verify.samples

    def checks(self) -> list[InvariantCheck]:
        rng = self.rng()
        samples = self.samples
        groups = {
            "operators": operator_checks(),
            "upwind": upwind_checks(),
            "undivided": undivided_checks(),
            "golden": golden_checks(),
            "half-node": half_node_checks(rng),
            "dissipation": scalar_dissipation_checks(rng, samples),
            "euler-dissipation": euler_dissipation_checks(rng, samples),
            "spectral-element": spectral_element_checks(),
            "convection": linear_convection_checks(rng),
            "burgers": burgers_checks(rng),
            "euler": euler_checks(rng),
            "integrator": integrator_checks(),
        }
        checks: list[InvariantCheck] = []
        for name, group in groups.items():
            found = list(group)
            failed = sum(not check.passed for check in found)
            self.logger.info(f"{name}: {len(found) - failed}/{len(found)} passed")
            checks.extend(found)
        return checks

    def run(self) -> ExperimentResult:
        self.logger.banner(f"Invariant suite with {self.samples} samples per property, seed {self.seed}")
        checks = self.checks()
        rows: list[dict[str, Any]] = [
            {
                "name": check.name,
                "residual": None if check.skip_reason else check.residual,
                "tolerance": None if check.skip_reason else check.tolerance,
                "passed": None if check.skip_reason else check.passed,
                "skipped": check.skip_reason,
            }
            for check in checks
        ]
        self.writer.write_csv("verify.csv", rows)
        failed = [check for check in checks if not check.passed]
        for check in failed:
            self.logger.error(f"FAILED {check.name}: residual {check.residual:.3e} > {check.tolerance:.1e}")
        for check in checks:
            if check.skip_reason:
                self.logger.info(f"SKIPPED {check.name}: {check.skip_reason}")
        summary = {
            "checks": len(checks),
            "passed": sum(check.passed and not check.skip_reason for check in checks),
            "failed": [check.name for check in failed],
            "skipped": {check.name: check.skip_reason for check in checks if check.skip_reason},
            "samples": self.samples,
            "seed": self.seed,
        }
        return self.result(summary, failed)
