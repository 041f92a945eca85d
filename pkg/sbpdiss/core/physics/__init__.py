"""PDE definitions: fluxes, entropy maps, eigensystems and two-point fluxes."""

from sbpdiss.core.physics.euler import (
    GAMMA,
    EulerState,
    entropy_variables,
    euler_flux_and_jacobian,
)
from sbpdiss.core.physics.fluxes import chandrashekar_flux, log_mean, ranocha_flux_2d
from sbpdiss.core.physics.scalar import burgers_flux_split

__all__ = [
    "GAMMA",
    "EulerState",
    "burgers_flux_split",
    "chandrashekar_flux",
    "entropy_variables",
    "euler_flux_and_jacobian",
    "log_mean",
    "ranocha_flux_2d",
]
