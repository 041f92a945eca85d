"""Command-line entry point: ``sbpdiss <command> --config <path>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence, get_args

from sbpdiss.cli.models import CommandName, ExperimentConfig
from sbpdiss.cli.parsing import parse_config
from sbpdiss.core.exceptions import ConfigValidationError, SbpDissError
from sbpdiss.core.logger import configure_logging, get_logger
from sbpdiss.core.settings import get_settings
from sbpdiss.services.experiment_service import ExperimentService

logger = get_logger(__name__)

UNEXPECTED_EXIT_CODE = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbpdiss",
        description="Volume dissipation for summation-by-parts operators: invariant checks, spectra and PDE runs.",
    )
    parser.add_argument("command", choices=list(get_args(CommandName)), help="Experiment to run.")
    parser.add_argument("--config", type=Path, required=True, help="JSON experiment configuration.")
    parser.add_argument("--out", type=str, default=None, help="Output directory (default: results/<command>).")
    parser.add_argument("--seed", type=int, default=None, help="Seed for random property sweeps.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for Jacobian columns and grid sweeps.")
    return parser


def _emit(payload: dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    sys.stdout.flush()


def _write_error(out_dir: Path | None, record: dict[str, Any]) -> None:
    if out_dir is None:
        return
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "error.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        logger.warning(f"Could not write error record to {out_dir}: {exc}")


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(settings.logging)

    service = ExperimentService(settings)
    out_dir = Path(args.out) if args.out else None
    config: ExperimentConfig | None = None
    try:
        try:
            text = args.config.read_bytes()
        except OSError as exc:
            raise ConfigValidationError([{"field": "config", "reason": f"cannot read {args.config}: {exc.strerror}"}]) from exc
        config = parse_config(
            text,
            settings.presets,
            overrides={"command": args.command, "seed": args.seed, "threads": args.threads, "out": args.out},
        )
        out_dir = service.output_dir(config, args.out)
        result = service.run_command(config, out_dir)
    except SbpDissError as exc:
        record = exc.to_record()
        _write_error(out_dir, record)
        _emit(record)
        return exc.exit_code
    except Exception as exc:
        logger.exception(f"Unexpected failure: {exc}")
        record = {"error": exc.__class__.__name__, "message": str(exc), "exit_code": UNEXPECTED_EXIT_CODE}
        _write_error(out_dir, record)
        _emit(record)
        return UNEXPECTED_EXIT_CODE

    if result.error is not None:
        _write_error(out_dir, result.error)
    _emit(result.model_dump(mode="json", exclude={"tables"}))
    return result.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
