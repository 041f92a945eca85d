from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from sbpdiss.core.dissipation import CoefficientMode
from sbpdiss.core.operators import Family
from sbpdiss.core.semidisc import SatKind, Scheme
from sbpdiss.core.solver import Method

CommandName = Literal[
    "verify",
    "spectra",
    "convergence",
    "run1d",
    "vortex",
    "khi-demo",
    "dump-operator",
    "dump-dissipation",
]
PdeName = Literal["linear-convection", "burgers", "euler-1d", "euler-2d"]
ProblemName = Literal["gaussian", "sine", "burgers-sine", "density-wave", "vortex", "khi"]

DEFAULT_PDE: dict[str, PdeName] = {
    "spectra": "linear-convection",
    "convergence": "linear-convection",
    "run1d": "burgers",
    "vortex": "euler-2d",
    "khi-demo": "euler-2d",
}
DEFAULT_PROBLEM: dict[str, ProblemName] = {
    "linear-convection": "gaussian",
    "burgers": "burgers-sine",
    "euler-1d": "density-wave",
    "euler-2d": "vortex",
}


class DissipationVariant(BaseModel):
    """One dissipation operator of a spectra sweep."""

    include_B: bool = Field(default=True, description="Zero the clamped boundary rows")
    include_Htilde: bool = Field(default=False, description="Weight rows by the undivided norm")
    label: str | None = None
    model_config = ConfigDict(extra="forbid")

    @property
    def name(self) -> str:
        return self.label or f"B{int(self.include_B)}-H{int(self.include_Htilde)}"


class IntegratorSettings(BaseModel):
    """Time-integrator overrides; unset fields fall back to app_config.json."""

    method: Method = Method.DORMAND_PRINCE_54
    rtol: float | None = Field(default=None, gt=0)
    atol: float | None = Field(default=None, gt=0)
    dt_init: float | None = Field(default=None, gt=0)
    dt_min: float | None = Field(default=None, gt=0)
    cfl: float | None = Field(default=None, gt=0)
    model_config = ConfigDict(extra="forbid")


class ExperimentConfig(BaseModel):
    command: CommandName = Field(description="Experiment to run")

    # operator
    family: Family = Family.CSBP
    p: int = Field(ge=1, le=8, description="Operator degree")
    nodes: int | None = Field(default=None, alias="N", ge=2, description="Nodes per block")
    blocks: int = Field(default=1, ge=1)
    s: int | None = Field(default=None, ge=1, description="Order of the undivided difference")
    grids: list[int] | None = Field(default=None, description="Nodes (CSBP) or elements per direction (SE) per level")

    # semi-discretization
    pde: PdeName | None = None
    problem: ProblemName | None = None
    scheme: Scheme | None = None
    sat: SatKind | None = None
    two_point: str | None = None
    splitting: str | None = None

    # dissipation
    eps: float | str = Field(default=0.0, description="Strength or preset: large, small, se, se-khi")
    eps_resolved: float | None = None
    include_B: bool = True
    include_Htilde: bool = False
    mode: CoefficientMode | None = None
    variants: list[DissipationVariant] | None = None

    # PDE parameters
    a: float = Field(default=1.0, description="Convection speed")
    gamma: float = Field(default=1.4, gt=1.0)
    beta: float = Field(default=1.5, description="Burgers mean state")
    mach: float = Field(default=0.5, gt=0.0)
    radius: float = Field(default=0.5, gt=0.0)
    vortex_strength: float = Field(default=0.2, ge=0.0)

    # time integration
    t_final: float | None = Field(default=None, gt=0)
    integrator: IntegratorSettings = Field(default_factory=IntegratorSettings)
    outputs: int = Field(default=20, ge=1, description="Equispaced output samples")
    jacobian_samples: int = Field(default=0, ge=0)
    jacobian_grids: list[int] | None = None
    tolerance_check: bool = False
    compare_baseline: bool | None = Field(default=None, description="Also run without volume dissipation")

    # run control
    samples: int | None = Field(default=None, ge=1, description="Random samples per property in verify")
    seed: int | None = Field(default=None, ge=0, le=2**64 - 1)
    threads: int = Field(default=1, ge=1)
    out: str | None = None

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    @model_validator(mode="after")
    def _fill_defaults(self) -> ExperimentConfig:
        if self.s is None:
            self.s = self.p if self.family.is_spectral else self.p + 1
        if self.pde is None:
            self.pde = DEFAULT_PDE.get(self.command, "linear-convection")
        if self.problem is None:
            self.problem = "khi" if self.command == "khi-demo" else DEFAULT_PROBLEM[self.pde]
        if self.grids is not None and len(self.grids) == 0:
            raise ValueError("grids must not be empty")
        return self

    @property
    def n(self) -> int | None:
        return self.nodes

    def resolved(self) -> dict[str, Any]:
        """The configuration as echoed into every output."""
        return self.model_dump(mode="json", by_alias=True)


class ExperimentResult(BaseModel):
    command: CommandName
    status: Literal["ok", "failed"] = "ok"
    exit_code: int = 0
    tables: dict[str, dict[str, Any]] = Field(default_factory=dict, description="JSON mirror of every CSV table")
    summary: dict[str, Any] = Field(default_factory=dict)
    files: list[str] = Field(default_factory=list)
    config_hash: str | None = None
    error: dict[str, Any] | None = None
