"""Builds grids, dissipation and semi-discretizations from an experiment config."""

from __future__ import annotations

import math
from functools import partial
from typing import Any

import numpy as np

from sbpdiss.cli.models import ExperimentConfig
from sbpdiss.core.dissipation import CoefficientMode, DissipationOperator, build_dissipation
from sbpdiss.core.exceptions import ConfigValidationError
from sbpdiss.core.operators import SbpOperator
from sbpdiss.core.semidisc import (
    Burgers1D,
    Euler1D,
    Euler2D,
    LinearConvection1D,
    SatKind,
    Scheme,
    SemiDiscretization,
    build_grid_1d,
    build_grid_2d,
    build_upwind_grid_1d,
    build_upwind_grid_2d,
)
from sbpdiss.core.semidisc import problems
from sbpdiss.core.settings import SolverConfigModel
from sbpdiss.core.solver import TimeIntegrator

PROBLEM_PDES: dict[str, tuple[str, ...]] = {
    "gaussian": ("linear-convection",),
    "sine": ("linear-convection", "burgers"),
    "burgers-sine": ("burgers",),
    "density-wave": ("euler-1d",),
    "vortex": ("euler-2d",),
    "khi": ("euler-2d",),
}

DOMAINS: dict[str, tuple[float, float]] = {
    "gaussian": (0.0, 1.0),
    "sine": (0.0, 1.0),
    "burgers-sine": (0.0, 1.0),
    "density-wave": (-1.0, 1.0),
    "vortex": (-5.0, 5.0),
    "khi": (-1.0, 1.0),
}

# scheme, SAT and dissipation coefficient used when the config leaves them unset
DEFAULTS: dict[str, tuple[Scheme, SatKind, CoefficientMode]] = {
    "linear-convection": (Scheme.CENTRAL, SatKind.LAX_FRIEDRICHS, CoefficientMode.NODAL_SCALAR),
    "burgers": (Scheme.SPLIT_FORM_BURGERS, SatKind.RUSANOV, CoefficientMode.NODAL_SCALAR),
    "euler-1d": (Scheme.HADAMARD_ENTROPY_STABLE, SatKind.ENTROPY_DISSIPATIVE_MATRIX, CoefficientMode.MATRIX_MATRIX_BLOCK),
    "vortex": (Scheme.CENTRAL, SatKind.ROE_MATRIX, CoefficientMode.MATRIX_BLOCK),
    "khi": (Scheme.HADAMARD_ENTROPY_STABLE, SatKind.ENTROPY_DISSIPATIVE_MATRIX, CoefficientMode.MATRIX_MATRIX_BLOCK),
}

T_FINAL: dict[str, float] = {
    "gaussian": 1.0,
    "sine": 1.0,
    "burgers-sine": 1.0 / (2.0 * math.pi),
    "density-wave": 10.0,
    "vortex": 20.0,
    "khi": 15.0,
}


def check_problem(config: ExperimentConfig) -> None:
    if config.pde not in PROBLEM_PDES[config.problem]:
        raise ConfigValidationError(
            [{"field": "problem", "reason": f"{config.problem} is not a {config.pde} problem. Valid for: {list(PROBLEM_PDES[config.problem])}"}]
        )


def resolve_defaults(config: ExperimentConfig) -> tuple[Scheme, SatKind, CoefficientMode]:
    key = config.problem if config.pde == "euler-2d" else config.pde
    scheme, sat, mode = DEFAULTS[key]
    return config.scheme or scheme, config.sat or sat, config.mode or mode


def default_t_final(config: ExperimentConfig) -> float:
    if config.t_final is not None:
        return config.t_final
    if config.problem == "vortex":
        return problems.IsentropicVortex(mach=config.mach).period
    return T_FINAL[config.problem]


def time_integrator(config: ExperimentConfig, solver: SolverConfigModel, t_final: float | None = None) -> TimeIntegrator:
    settings = config.integrator
    return TimeIntegrator(
        method=settings.method,
        t_final=t_final if t_final is not None else default_t_final(config),
        rtol=settings.rtol or solver.rtol,
        atol=settings.atol or solver.atol,
        dt_init=settings.dt_init,
        dt_min=settings.dt_min or solver.dt_min,
        cfl=settings.cfl,
        safety=solver.safety,
        min_factor=solver.min_factor,
        max_factor=solver.max_factor,
        max_steps=solver.max_steps,
    )


def build_grid(config: ExperimentConfig, size: int | None = None, scheme: Scheme | None = None) -> Any:
    """Grid of one level; ``size`` is nodes per block (FD) or blocks per direction (SE, upwind)."""
    check_problem(config)
    scheme = scheme or resolve_defaults(config)[0]
    x0, x1 = DOMAINS[config.problem]
    two_d = config.pde == "euler-2d"

    if scheme is Scheme.UPWIND_FVS:
        blocks = size or config.blocks
        return build_upwind_grid_2d(blocks, x0, x1, x0, x1) if two_d else build_upwind_grid_1d(blocks, x0, x1)
    if config.family.is_spectral:
        n, blocks = config.nodes, size or config.blocks
    else:
        n, blocks = size or config.nodes, config.blocks
        if n is None:
            raise ConfigValidationError([{"field": "N", "reason": f"{config.family} needs the number of nodes per block"}])
    if two_d:
        return build_grid_2d(config.family, config.p, n, blocks, x0, x1, x0, x1)
    return build_grid_1d(config.family, config.p, n, blocks, x0, x1)


def build_volume_dissipation(
        config: ExperimentConfig,
        op: SbpOperator,
        eps: float | None = None,
        include_B: bool | None = None,
        include_Htilde: bool | None = None,
        mode: CoefficientMode | None = None,
) -> DissipationOperator | None:
    eps = config.eps_resolved if eps is None else eps
    if not eps:
        return None
    mode = mode or resolve_defaults(config)[2]
    include_B = config.include_B if include_B is None else include_B
    include_Htilde = config.include_Htilde if include_Htilde is None else include_Htilde
    if op.dist.family.is_spectral:
        # C = I: on one element every admissible C gives the same operator up to scaling
        include_B, include_Htilde = False, False
    return build_dissipation(op, config.s, eps, include_B, include_Htilde, mode)


def build_semidisc(
        config: ExperimentConfig,
        size: int | None = None,
        eps: float | None = None,
        scheme: Scheme | None = None,
        sat: SatKind | None = None,
        mode: CoefficientMode | None = None,
        include_B: bool | None = None,
        include_Htilde: bool | None = None,
) -> SemiDiscretization:
    default_scheme, default_sat, default_mode = resolve_defaults(config)
    scheme, sat, mode = scheme or default_scheme, sat or default_sat, mode or default_mode
    grid = build_grid(config, size, scheme)
    dissipation = build_volume_dissipation(config, grid.op, eps, include_B, include_Htilde, mode)

    if config.pde == "linear-convection":
        return LinearConvection1D(grid, sat=sat, dissipation=dissipation, wave_speed=config.a)
    if config.pde == "burgers":
        return Burgers1D(grid, scheme=scheme, sat=sat, dissipation=dissipation)
    options = {"gamma": config.gamma}
    if config.two_point:
        options["two_point"] = config.two_point
    if config.splitting:
        options["splitting"] = config.splitting
    if config.pde == "euler-1d":
        return Euler1D(grid, scheme=scheme, sat=sat, dissipation=dissipation, **options)
    return Euler2D(grid, scheme=scheme, sat=sat, dissipation=dissipation, **options)


def _vortex(config: ExperimentConfig) -> problems.IsentropicVortex:
    return problems.IsentropicVortex(
        mach=config.mach, strength=config.vortex_strength, radius=config.radius, gamma=config.gamma
    )


def _profile(config: ExperimentConfig):
    if config.problem == "gaussian":
        return problems.gaussian
    if config.problem == "sine":
        return problems.sine_wave
    return partial(problems.burgers_sine, beta=config.beta)


def initial_state(config: ExperimentConfig, grid: Any) -> np.ndarray:
    if config.problem == "density-wave":
        return problems.density_wave(grid.nodes, gamma=config.gamma)
    if config.problem == "vortex":
        return _vortex(config).state(*grid.nodes)
    if config.problem == "khi":
        return problems.kelvin_helmholtz(*grid.nodes, gamma=config.gamma)
    return _profile(config)(grid.nodes)


def exact_state(config: ExperimentConfig, grid: Any, t: float) -> np.ndarray | None:
    """Exact solution at t, or None for problems without one."""
    if config.pde == "linear-convection":
        x0, x1 = DOMAINS[config.problem]
        return problems.convection_exact(_profile(config), grid.nodes, t, config.a, x0, x1 - x0)
    if config.problem == "density-wave":
        return problems.density_wave(grid.nodes, t, gamma=config.gamma)
    if config.problem == "vortex":
        return _vortex(config).state(*grid.nodes, t)
    return None
