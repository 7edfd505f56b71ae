from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

DEFAULT_SETTINGS_NAME = "dgbv_lab.yml"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ConfigError(Exception):
    """Raised when the dGBV Lab settings file is invalid."""


class EngineSettings(BaseModel):
    """Defaults for solver runs, overridable per command."""

    order: int = Field(default=4, ge=1, le=8)
    mode: Literal["analytic", "normalized"] = "analytic"
    output_format: Literal["text", "machine"] = "text"
    log_level: str = "WARNING"
    lefschetz_omega: Optional[str] = None
    source_path: Optional[Path] = Field(default=None, exclude=True)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        return level


def _load_yaml(path: Path) -> dict:
    try:
        with path.open("r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
    except FileNotFoundError as exc:
        raise ConfigError(f"Settings file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Failed to parse YAML from {path}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"Settings file {path} must contain a mapping")
    return data


def find_settings(start: Optional[Path] = None) -> Optional[Path]:
    """Find ``dgbv_lab.yml`` by walking up from ``start`` (defaults to CWD)."""

    cwd = start or Path.cwd()
    for candidate in [cwd, *cwd.parents]:
        path = candidate / DEFAULT_SETTINGS_NAME
        if path.exists():
            return path
    return None


def load_settings(path: Optional[Path] = None) -> EngineSettings:
    """Load settings from ``path`` or the nearest ``dgbv_lab.yml``; defaults when none exists."""

    settings_path = path or find_settings()
    if settings_path is None:
        return EngineSettings()
    raw = _load_yaml(settings_path)
    try:
        settings = EngineSettings(**raw)
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors())
        raise ConfigError(f"Invalid settings in {settings_path}: {problems}") from exc
    settings.source_path = settings_path
    return settings


def save_settings(path: Path, settings: EngineSettings) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(yaml.safe_dump(settings.model_dump(mode="json"), sort_keys=False), encoding="utf-8")
