import csv
import hashlib
import json
import numbers
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from sbpdiss.core.logger import Logger, get_logger


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_jsonable)


def config_hash(config: Mapping[str, Any]) -> str:
    """SHA-256 of the canonical JSON form of the resolved config."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class OutputWriter:
    """
    Owns the output directory of one run.

    Every file written through the writer is registered, and the manifest
    lists them together with the resolved config and its hash.
    """

    def __init__(
        self,
        base_dir: str | Path,
        config: Mapping[str, Any],
        float_digits: int = 17,
        manifest_name: str = "manifest.json",
        logger: Logger | None = None,
    ) -> None:
        self.base_dir = Path(base_dir)
        self.config = dict(config)
        self.config_hash = config_hash(self.config)
        self.float_format = f"%.{float_digits}g"
        self.manifest_name = manifest_name
        self.logger = logger or get_logger(self.__class__.__name__)
        self._created_files: list[Path] = []
        self.tables: dict[str, dict[str, list]] = {}

    @property
    def files(self) -> list[str]:
        return [str(path.relative_to(self.base_dir)) for path in self._created_files]

    def create_file_path(self, *path_parts: str) -> Path:
        file_path = self.base_dir / Path(*path_parts)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        return file_path

    def register_file(self, file_path: str | Path) -> None:
        path = Path(file_path)
        if path not in self._created_files:
            self._created_files.append(path)

    def format_value(self, value: Any) -> str:
        if value is None:
            return ""
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, numbers.Integral):
            return str(int(value))
        if isinstance(value, numbers.Real):
            return self.float_format % float(value)
        return str(value)

    @staticmethod
    def mirror_value(value: Any) -> Any:
        """JSON counterpart of a CSV cell; floats keep every bit."""
        if value is None or isinstance(value, (bool, np.bool_)):
            return None if value is None else bool(value)
        if isinstance(value, numbers.Integral):
            return int(value)
        if isinstance(value, numbers.Real):
            return float(value)
        return str(value)

    @staticmethod
    def _split_complex(row: Mapping[str, Any]) -> dict[str, Any]:
        flat: dict[str, Any] = {}
        for key, value in row.items():
            if isinstance(value, (complex, np.complexfloating)):
                flat[f"{key}_re"] = float(np.real(value))
                flat[f"{key}_im"] = float(np.imag(value))
            else:
                flat[key] = value
        return flat

    def write_csv(self, name: str, rows: Iterable[Mapping[str, Any]]) -> Path:
        """RFC-4180 table with a leading config-hash comment line."""
        flat_rows = [self._split_complex(row) for row in rows]
        columns: list[str] = []
        for row in flat_rows:
            columns.extend(key for key in row if key not in columns)

        path = self.create_file_path(name)
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(f"# config_hash={self.config_hash}\r\n")
            writer = csv.writer(handle, lineterminator="\r\n")
            writer.writerow(columns)
            for row in flat_rows:
                writer.writerow([self.format_value(row.get(column)) for column in columns])
        self.tables[name] = {
            "columns": columns,
            "rows": [[self.mirror_value(row.get(column)) for column in columns] for row in flat_rows],
        }
        self.register_file(path)
        self.logger.debug(f"Wrote {len(flat_rows)} rows to {path}")
        return path

    def write_matrix(self, name: str, matrix: np.ndarray) -> Path:
        """Header ``# rows cols`` then row-major values."""
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        path = self.create_file_path(name)
        with path.open("w", encoding="utf-8") as handle:
            handle.write(f"# {matrix.shape[0]} {matrix.shape[1]}\n")
            for row in matrix:
                handle.write(" ".join(self.float_format % value for value in row) + "\n")
        self.register_file(path)
        self.logger.debug(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {path}")
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        path = self.create_file_path(name)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n", encoding="utf-8")
        self.register_file(path)
        return path

    def write_manifest(
        self,
        command: str,
        summary: Mapping[str, Any],
        status: str = "ok",
        exit_code: int = 0,
        error: Mapping[str, Any] | None = None,
    ) -> Path:
        manifest = {
            "command": command,
            "config": self.config,
            "config_hash": self.config_hash,
            "files": self.files,
            "summary": dict(summary),
            "tables": self.tables,
            "status": status,
            "exit_code": exit_code,
        }
        if error is not None:
            manifest["error"] = dict(error)
        path = self.write_json(self.manifest_name, manifest)
        self.logger.info(f"Manifest written to {path}")
        return path
