"""Semi-discretizations du/dt = R(u) on periodic multi-block grids."""

from sbpdiss.core.semidisc.base import (
    Functionals,
    SatKind,
    Scheme,
    SemiDiscretization,
    assemble_linear_operator,
)
from sbpdiss.core.semidisc.burgers import Burgers1D, upwind_dissipation_energy
from sbpdiss.core.semidisc.convection import LinearConvection1D
from sbpdiss.core.semidisc.euler1d import Euler1D
from sbpdiss.core.semidisc.euler2d import Euler2D
from sbpdiss.core.semidisc.grid import (
    PeriodicGrid1D,
    PeriodicGrid2D,
    build_grid_1d,
    build_grid_2d,
    build_upwind_grid_1d,
    build_upwind_grid_2d,
)

__all__ = [
    "Burgers1D",
    "Euler1D",
    "Euler2D",
    "Functionals",
    "LinearConvection1D",
    "PeriodicGrid1D",
    "PeriodicGrid2D",
    "SatKind",
    "Scheme",
    "SemiDiscretization",
    "assemble_linear_operator",
    "build_grid_1d",
    "build_grid_2d",
    "build_upwind_grid_1d",
    "build_upwind_grid_2d",
    "upwind_dissipation_energy",
]
