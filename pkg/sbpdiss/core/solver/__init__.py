"""Time integration, Jacobians, spectra and convergence studies."""

from sbpdiss.core.solver.convergence import (
    ConvergenceLevel,
    ConvergenceReport,
    fit_rate,
    h_norm_error,
    run_convergence,
)
from sbpdiss.core.solver.integrators import (
    CrashInfo,
    Method,
    TimeIntegrator,
    Trajectory,
    integrate,
)
from sbpdiss.core.solver.jacobian import JacobianMethod, JacobianResult, jacobian
from sbpdiss.core.solver.spectra import (
    SpectrumReport,
    backward_error,
    conjugate_pairing_error,
    eigenvalues,
    spectrum,
    spectrum_of,
)

__all__ = [
    "ConvergenceLevel",
    "ConvergenceReport",
    "CrashInfo",
    "JacobianMethod",
    "JacobianResult",
    "Method",
    "SpectrumReport",
    "TimeIntegrator",
    "Trajectory",
    "backward_error",
    "conjugate_pairing_error",
    "eigenvalues",
    "fit_rate",
    "h_norm_error",
    "integrate",
    "jacobian",
    "run_convergence",
    "spectrum",
    "spectrum_of",
]
