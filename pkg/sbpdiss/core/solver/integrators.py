"""Explicit Runge-Kutta time integration with crash detection.

Two methods are available: classical RK4 with a fixed or CFL-limited step,
and the Dormand-Prince 5(4) pair with a PI step-size controller. A run that
produces an inadmissible state, or whose step size collapses below
``dt_min``, stops and reports a :class:`CrashInfo` instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from sbpdiss._compat import StrEnum
from typing import Any, Callable, Protocol, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from sbpdiss.core.exceptions import CrashDetected, NonAdmissibleState
from sbpdiss.core.logger import Logger, get_logger

# Dormand-Prince 5(4) extended Butcher table, row k holds the weights of stage k+1
DP54_NODES = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
DP54_TABLE = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# difference between the fifth- and fourth-order weights
DP54_ERROR = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

PI_BETA_1 = 0.7 / 5
PI_BETA_2 = 0.4 / 5


class Method(StrEnum):
    RK4 = "RK4"
    DORMAND_PRINCE_54 = "DormandPrince54"


class TimeIntegrator(BaseModel):
    method: Method = Method.DORMAND_PRINCE_54
    t_final: float = Field(gt=0)
    rtol: float = Field(default=1e-11, gt=0)
    atol: float = Field(default=1e-11, gt=0)
    dt_init: float | None = Field(default=None, gt=0)
    dt_min: float = Field(default=1e-10, gt=0)
    cfl: float | None = Field(default=None, gt=0)
    safety: float = Field(default=0.9, gt=0, le=1)
    min_factor: float = Field(default=0.2, gt=0, le=1)
    max_factor: float = Field(default=5.0, ge=1)
    max_steps: int = Field(default=2_000_000, ge=1)
    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _fixed_step_needs_size(self) -> TimeIntegrator:
        if self.method is Method.RK4 and self.dt_init is None and self.cfl is None:
            raise ValueError("RK4 needs dt_init or cfl")
        return self

    def halved(self) -> TimeIntegrator:
        """Same integrator with both tolerances halved."""
        return self.model_copy(update={"rtol": self.rtol / 2, "atol": self.atol / 2})


class RightHandSide(Protocol):
    def __call__(self, u: np.ndarray, t: float = 0.0) -> np.ndarray: ...


Observer = Callable[[float, np.ndarray], dict[str, Any] | None]


@dataclass(frozen=True)
class CrashInfo:
    time: float
    cause: str

    def as_dict(self) -> dict[str, Any]:
        return {"crash_time": self.time, "crash_cause": self.cause}


@dataclass
class Trajectory:
    t: float
    state: np.ndarray
    accepted: int = 0
    rejected: int = 0
    crash: CrashInfo | None = None
    times: list[float] = field(default_factory=list)
    states: list[np.ndarray] = field(default_factory=list)
    records: list[dict[str, Any]] = field(default_factory=list)

    @property
    def crashed(self) -> bool:
        return self.crash is not None

    @property
    def crash_time(self) -> float | None:
        return None if self.crash is None else self.crash.time


def _state_check(semidisc: Any) -> Callable[[np.ndarray], None]:
    return getattr(semidisc, "check_state", lambda u: None)


def _error_norm(error: np.ndarray, u: np.ndarray, u_new: np.ndarray, rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(u), np.abs(u_new))
    return float(np.sqrt(np.mean((error / scale) ** 2)))


def _initial_step(rhs: RightHandSide, u: np.ndarray, t: float, f0: np.ndarray, integrator: TimeIntegrator) -> float:
    """Hairer's starting step for a fifth-order method."""
    scale = integrator.atol + integrator.rtol * np.abs(u)
    d0 = float(np.sqrt(np.mean((u / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = rhs(u + h0 * f0, t + h0)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / 5.0)
    return min(100.0 * h0, h1, integrator.t_final - t)


def rk4_step(rhs: RightHandSide, u: np.ndarray, t: float, dt: float) -> np.ndarray:
    k1 = rhs(u, t)
    k2 = rhs(u + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = rhs(u + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = rhs(u + dt * k3, t + dt)
    return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def dp54_step(rhs: RightHandSide, u: np.ndarray, t: float, dt: float, k1: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One Dormand-Prince step: returns (u_new, error estimate, last stage for FSAL reuse)."""
    stages = [rhs(u, t) if k1 is None else k1]
    for row, c in zip(DP54_TABLE, DP54_NODES[1:]):
        increment = sum(a * k for a, k in zip(row, stages) if a != 0.0)
        stages.append(rhs(u + dt * increment, t + c * dt))
    # the sixth table row holds the fifth-order weights, so stage 7 is evaluated at u_new
    u_new = u + dt * sum(b * k for b, k in zip(DP54_TABLE[-1], stages) if b != 0.0)
    error = dt * sum(e * k for e, k in zip(DP54_ERROR, stages) if e != 0.0)
    return u_new, error, stages[-1]


class _Sampler:
    """Calls the observer at the requested output times."""

    def __init__(self, times: Sequence[float], observer: Observer | None, store_states: bool, trajectory: Trajectory):
        self.pending = sorted(float(t) for t in times)
        self.observer = observer
        self.store_states = store_states
        self.trajectory = trajectory

    def next_time(self, t_final: float) -> float:
        return self.pending[0] if self.pending else t_final

    def record(self, t: float, u: np.ndarray) -> None:
        while self.pending and self.pending[0] <= t * (1 + 1e-14) + 1e-14:
            self.pending.pop(0)
            self.emit(t, u)

    def emit(self, t: float, u: np.ndarray) -> None:
        self.trajectory.times.append(t)
        if self.store_states:
            self.trajectory.states.append(u.copy())
        if self.observer is not None:
            row = self.observer(t, u)
            if row is not None:
                self.trajectory.records.append({"t": t, **row})


def integrate(
        semidisc: RightHandSide,
        u0: np.ndarray,
        integrator: TimeIntegrator,
        sample_times: Sequence[float] = (),
        observer: Observer | None = None,
        store_states: bool = False,
        logger: Logger | None = None,
) -> Trajectory:
    """Advance ``u0`` from t = 0 to ``integrator.t_final``.

    ``semidisc`` is any callable ``R(u, t)``; when it has a ``check_state``
    method every accepted state is checked with it. ``observer`` is called at
    t = 0, at each of ``sample_times`` and at the final or crash time; the
    dictionaries it returns end up in ``Trajectory.records``.
    """
    logger = logger or get_logger(__name__)
    check_state = _state_check(semidisc)
    u = np.array(u0, dtype=float)
    trajectory = Trajectory(t=0.0, state=u)
    sample_times = [t for t in sample_times if 0.0 < t < integrator.t_final]
    sampler = _Sampler([0.0, *sample_times, integrator.t_final], observer, store_states, trajectory)

    try:
        check_state(u)
    except NonAdmissibleState as exc:
        trajectory.crash = CrashInfo(0.0, str(exc))
        return trajectory
    sampler.record(0.0, u)

    stepper = _run_rk4 if integrator.method is Method.RK4 else _run_dp54
    try:
        stepper(semidisc, check_state, trajectory, sampler, integrator, logger)
    except CrashDetected as exc:
        logger.info(f"Run stopped at t={exc.time:.6g}: {exc.cause}")
        trajectory.crash = CrashInfo(exc.time, exc.cause)
        if trajectory.times[-1] != trajectory.t:
            sampler.emit(trajectory.t, trajectory.state)
    return trajectory


def _accept(trajectory: Trajectory, sampler: _Sampler, check_state, t_new: float, u_new: np.ndarray) -> None:
    try:
        check_state(u_new)
    except NonAdmissibleState as exc:
        raise CrashDetected(t_new, str(exc)) from exc
    trajectory.t, trajectory.state = t_new, u_new
    trajectory.accepted += 1
    sampler.record(t_new, u_new)


def _run_rk4(semidisc, check_state, trajectory: Trajectory, sampler: _Sampler, integrator: TimeIntegrator, logger: Logger) -> None:
    t_final = integrator.t_final
    while trajectory.t < t_final * (1 - 1e-15):
        if trajectory.accepted >= integrator.max_steps:
            raise CrashDetected(trajectory.t, f"step limit {integrator.max_steps} reached")
        t, u = trajectory.t, trajectory.state
        if integrator.cfl is not None:
            dt = semidisc.stable_time_step(u, integrator.cfl)
        else:
            dt = integrator.dt_init
        if not math.isfinite(dt) or dt < integrator.dt_min:
            raise CrashDetected(t, f"time step {dt:.3e} below {integrator.dt_min:.0e}")
        dt = min(dt, sampler.next_time(t_final) - t)
        try:
            u_new = rk4_step(semidisc, u, t, dt)
        except NonAdmissibleState as exc:
            raise CrashDetected(t, str(exc)) from exc
        if not np.all(np.isfinite(u_new)):
            raise CrashDetected(t + dt, "non-finite state")
        _accept(trajectory, sampler, check_state, t + dt, u_new)
        logger.debug(f"RK4 step {trajectory.accepted}: t={trajectory.t:.6g} dt={dt:.3e}")


def _run_dp54(semidisc, check_state, trajectory: Trajectory, sampler: _Sampler, integrator: TimeIntegrator, logger: Logger) -> None:
    t_final = integrator.t_final
    t, u = trajectory.t, trajectory.state
    try:
        k1 = semidisc(u, t)
        dt = integrator.dt_init or _initial_step(semidisc, u, t, k1, integrator)
    except NonAdmissibleState as exc:
        raise CrashDetected(t, str(exc)) from exc
    previous_error = 1.0

    while trajectory.t < t_final * (1 - 1e-15):
        if trajectory.accepted + trajectory.rejected >= integrator.max_steps:
            raise CrashDetected(trajectory.t, f"step limit {integrator.max_steps} reached")
        if dt < integrator.dt_min:
            raise CrashDetected(trajectory.t, f"time step {dt:.3e} below {integrator.dt_min:.0e}")
        t, u = trajectory.t, trajectory.state
        step = min(dt, sampler.next_time(t_final) - t)

        try:
            u_new, error, k_last = dp54_step(semidisc, u, t, step, k1)
            error_norm = _error_norm(error, u, u_new, integrator.rtol, integrator.atol)
        except NonAdmissibleState:
            # an inadmissible stage state rejects the step
            error_norm = math.inf
        if not math.isfinite(error_norm):
            trajectory.rejected += 1
            dt = step * integrator.min_factor
            logger.debug(f"DP54 stage failure at t={t:.6g}, retrying with dt={dt:.3e}")
            continue

        if error_norm <= 1.0:
            _accept(trajectory, sampler, check_state, t + step, u_new)
            k1 = k_last
            factor = integrator.safety * max(error_norm, 1e-10) ** (-PI_BETA_1) * previous_error**PI_BETA_2
            previous_error = max(error_norm, 1e-4)
            factor = min(integrator.max_factor, max(integrator.min_factor, factor))
            # grow from the controller step, not from a step shortened to hit an output time
            dt = dt * factor
            logger.debug(f"DP54 step {trajectory.accepted}: t={trajectory.t:.6g} dt={step:.3e} err={error_norm:.3e}")
        else:
            trajectory.rejected += 1
            factor = integrator.safety * error_norm ** (-1.0 / 5.0)
            dt = step * min(1.0, max(integrator.min_factor, factor))
