"""Experiment service - runs one command and records its outputs."""

from __future__ import annotations

from pathlib import Path

from sbpdiss.cli.models import ExperimentConfig, ExperimentResult
from sbpdiss.core.exceptions import ConfigValidationError, SbpDissError
from sbpdiss.core.logger import Logger, get_logger
from sbpdiss.core.settings import AppSettings
from sbpdiss.services.commands import COMMANDS
from sbpdiss.utils.output_writer import OutputWriter


class ExperimentService:
    """
    Orchestrates a single experiment run:
    - picks the command from the registry
    - owns the output directory through an OutputWriter
    - writes the manifest for successful and failed runs alike
    """

    def __init__(self, settings: AppSettings, logger: Logger | None = None) -> None:
        self.settings = settings
        self.logger = logger or get_logger(self.__class__.__name__)

    def output_dir(self, config: ExperimentConfig, out_dir: str | Path | None = None) -> Path:
        if out_dir is not None:
            return Path(out_dir)
        if config.out is not None:
            return Path(config.out)
        return Path(self.settings.output.directory) / config.command

    def writer(self, config: ExperimentConfig, out_dir: Path) -> OutputWriter:
        return OutputWriter(
            base_dir=out_dir,
            config=config.resolved(),
            float_digits=self.settings.output.float_digits,
            manifest_name=self.settings.output.manifest_name,
            logger=self.logger,
        )

    def run_command(self, config: ExperimentConfig, out_dir: str | Path | None = None) -> ExperimentResult:
        command_class = COMMANDS.get(config.command)
        if command_class is None:
            raise ConfigValidationError(
                [{"field": "command", "reason": f"Unknown command: {config.command}. Available: {list(COMMANDS)}"}]
            )

        writer = self.writer(config, self.output_dir(config, out_dir))
        run_logger = self.logger.bind(run=writer.config_hash[:8])
        run_logger.banner(
            f"Running {config.command} into {writer.base_dir}",
            f"Config hash: {writer.config_hash}",
        )

        command = command_class(
            config=config,
            settings=self.settings,
            writer=writer,
            logger=get_logger(command_class.__name__).bind(run=writer.config_hash[:8]),
        )
        try:
            result = command.run()
        except SbpDissError as exc:
            run_logger.exception(f"{config.command} failed: {exc}")
            record = exc.to_record()
            writer.write_manifest(config.command, {}, status="failed", exit_code=exc.exit_code, error=record)
            raise

        writer.write_manifest(result.command, result.summary, result.status, result.exit_code, result.error)
        result = result.model_copy(
            update={"files": writer.files, "config_hash": writer.config_hash, "tables": writer.tables}
        )
        run_logger.info(f"{config.command} finished with status {result.status} (exit {result.exit_code})")
        return result
