from sbpdiss.cli.models import DissipationVariant, ExperimentConfig, ExperimentResult, IntegratorSettings
from sbpdiss.cli.parsing import parse_config, resolve_epsilon

__all__ = [
    "DissipationVariant",
    "ExperimentConfig",
    "ExperimentResult",
    "IntegratorSettings",
    "parse_config",
    "resolve_epsilon",
]
