from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

import trafaret as t

from .errors import DomainError


@dataclass(frozen=True)
class QuadratureConfig:
    # None means "derive per call": pi/(2q) for the rotation angle, the
    # closed-form tail bound for the truncation radius.
    rotation_angle: float | None = None
    truncation_radius: float | None = None
    abs_tol: float = 1e-10
    max_nodes: int = 200_000
    max_blocks: int = 24
    max_degree: int = 12
    max_diff_order: int = 10

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if self.max_nodes < 15:
            raise DomainError(f"max_nodes must be at least 15, got {self.max_nodes}")
        if self.max_blocks < 4:
            raise DomainError(f"max_blocks must be at least 4, got {self.max_blocks}")
        if self.truncation_radius is not None and not self.truncation_radius > 0:
            raise DomainError("truncation_radius must be positive")
        if self.rotation_angle is not None and not self.rotation_angle > 0:
            raise DomainError("rotation_angle must be positive")

    def angle_for(self, q: int) -> float:
        limit = math.pi / (2 * q)
        if self.rotation_angle is None:
            return limit
        if self.rotation_angle > limit * (1 + 1e-12):
            raise DomainError(
                f"rotation_angle {self.rotation_angle!r} exceeds pi/(2q) for q={q}"
            )
        return self.rotation_angle

    def with_tol(self, abs_tol: float) -> QuadratureConfig:
        return replace(self, abs_tol=abs_tol)


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class OutputSpec:
    format: OutputFormat = OutputFormat.CSV
    path: Path | None = None
    precision: int = 12

    def __post_init__(self) -> None:
        if not 4 <= self.precision <= 17:
            raise DomainError(f"precision must be in [4, 17], got {self.precision}")

    @property
    def is_stdout(self) -> bool:
        return self.path is None

    def format_number(self, value: float) -> str:
        return f"{value:.{self.precision}g}"


@dataclass(frozen=True)
class Config:
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    output: OutputSpec = field(default_factory=OutputSpec)
    workers: int = 4


DEFAULTS_FILE_VALIDATOR = t.Dict(
    {
        t.Key("abs_tol", optional=True): t.ToFloat(gt=0),
        t.Key("max_nodes", optional=True): t.ToInt(gte=15),
        t.Key("max_blocks", optional=True): t.ToInt(gte=4),
        t.Key("max_degree", optional=True): t.ToInt(gte=0),
        t.Key("max_diff_order", optional=True): t.ToInt(gte=0),
        t.Key("rotation_angle", optional=True): t.ToFloat(gt=0),
        t.Key("truncation_radius", optional=True): t.ToFloat(gt=0),
        t.Key("precision", optional=True): t.ToInt(gte=4, lte=17),
        t.Key("format", optional=True): t.Enum(*(f.value for f in OutputFormat)),
        t.Key("workers", optional=True): t.ToInt(gte=1),
    }
)

_QUADRATURE_KEYS = frozenset(
    {
        "abs_tol",
        "max_nodes",
        "max_blocks",
        "max_degree",
        "max_diff_order",
        "rotation_angle",
        "truncation_radius",
    }
)


def parse_defaults_file(text: str) -> dict[str, Any]:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DomainError(f"line {lineno}: expected key=value, got {line!r}")
        raw[key.strip()] = value.strip()
    try:
        return DEFAULTS_FILE_VALIDATOR.check(raw)
    except t.DataError as exc:
        raise DomainError(f"invalid defaults file: {exc.as_dict()}") from exc


class EnvironConfigFactory:
    def __init__(self, environ: dict[str, str] | None = None) -> None:
        self._environ = environ if environ is not None else os.environ

    def _read_file(self, path: Path | None) -> dict[str, Any]:
        if path is None:
            name = self._environ.get("AIRYKIT_CONFIG")
            if not name:
                return {}
            path = Path(name)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DomainError(f"cannot read config file {str(path)!r}: {exc}") from exc
        return parse_defaults_file(text)

    def _read_environ(self) -> dict[str, Any]:
        values: dict[str, Any] = {}
        if "AIRYKIT_ABS_TOL" in self._environ:
            values["abs_tol"] = float(self._environ["AIRYKIT_ABS_TOL"])
        if "AIRYKIT_MAX_NODES" in self._environ:
            values["max_nodes"] = int(self._environ["AIRYKIT_MAX_NODES"])
        if "AIRYKIT_MAX_BLOCKS" in self._environ:
            values["max_blocks"] = int(self._environ["AIRYKIT_MAX_BLOCKS"])
        if "AIRYKIT_PRECISION" in self._environ:
            values["precision"] = int(self._environ["AIRYKIT_PRECISION"])
        if "AIRYKIT_WORKERS" in self._environ:
            values["workers"] = int(self._environ["AIRYKIT_WORKERS"])
        return values

    def create_quadrature(self, values: dict[str, Any]) -> QuadratureConfig:
        kwargs = {k: v for k, v in values.items() if k in _QUADRATURE_KEYS}
        return QuadratureConfig(**kwargs)

    def create_output(self, values: dict[str, Any]) -> OutputSpec:
        kwargs: dict[str, Any] = {}
        if "precision" in values:
            kwargs["precision"] = values["precision"]
        if "format" in values:
            kwargs["format"] = OutputFormat(values["format"])
        if values.get("out"):
            kwargs["path"] = Path(values["out"])
        return OutputSpec(**kwargs)

    def create(
        self,
        *,
        config_path: Path | None = None,
        overrides: dict[str, Any] | None = None,
    ) -> Config:
        values = self._read_file(config_path)
        try:
            values.update(self._read_environ())
        except ValueError as exc:
            raise DomainError(f"invalid AIRYKIT_* environment value: {exc}") from exc
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        workers = int(values.get("workers", Config.workers))
        if workers < 1:
            raise DomainError(f"workers must be positive, got {workers}")
        return Config(
            quadrature=self.create_quadrature(values),
            output=self.create_output(values),
            workers=workers,
        )
