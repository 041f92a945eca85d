from sbpdiss.services.commands.base import BaseCommand
from sbpdiss.services.commands.convergence import ConvergenceCommand
from sbpdiss.services.commands.dumps import DumpDissipationCommand, DumpOperatorCommand
from sbpdiss.services.commands.khi import KhiDemoCommand
from sbpdiss.services.commands.run1d import Run1DCommand
from sbpdiss.services.commands.spectra import SpectraCommand
from sbpdiss.services.commands.verify import VerifyCommand
from sbpdiss.services.commands.vortex import VortexCommand

COMMANDS: dict[str, type[BaseCommand]] = {
    command.command_code: command
    for command in (
        VerifyCommand,
        SpectraCommand,
        ConvergenceCommand,
        Run1DCommand,
        VortexCommand,
        KhiDemoCommand,
        DumpOperatorCommand,
        DumpDissipationCommand,
    )
}

__all__ = [
    "COMMANDS",
    "BaseCommand",
    "ConvergenceCommand",
    "DumpDissipationCommand",
    "DumpOperatorCommand",
    "KhiDemoCommand",
    "Run1DCommand",
    "SpectraCommand",
    "VerifyCommand",
    "VortexCommand",
]
