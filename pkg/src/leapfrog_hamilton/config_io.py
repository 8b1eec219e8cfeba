from __future__ import annotations

import dataclasses
import sys
from pathlib import Path
from typing import Any

import yaml

from .config import (
    COMMANDS,
    FORMATS,
    KIND_FILTERS,
    ORACLE_KINDS,
    PATH_FIELDS,
    OracleLimits,
    RunConfig,
    SeedPair,
)
from .errors import ConfigError
from .serialization import convert_for_output, maybe_relative

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def _read_mapping(path: Path) -> dict[str, Any]:
    try:
        if path.suffix.lower() == ".toml":
            with path.open("rb") as handle:
                data = tomllib.load(handle)
        else:
            with path.open("r", encoding="utf-8") as handle:
                data = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except (yaml.YAMLError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"config {path} is not valid: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a mapping, got {type(data).__name__}")
    return data


def _known_fields(cls: type, data: dict[str, Any], where: str) -> dict[str, Any]:
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return data


def run_config_from_mapping(data: dict[str, Any], base_dir: Path | None = None) -> RunConfig:
    data = dict(_known_fields(RunConfig, data, "run config"))

    seed = data.pop("seed", None)
    if seed is not None:
        if not isinstance(seed, dict):
            raise ConfigError("seed must be a mapping with hexagon and pentagon")
        try:
            data["seed"] = SeedPair(**_known_fields(SeedPair, seed, "seed"))
        except TypeError as exc:
            raise ConfigError(f"seed is incomplete: {exc}") from exc

    limits = data.pop("oracle_limits", None) or {}
    if not isinstance(limits, dict):
        raise ConfigError("oracle_limits must be a mapping")
    data["oracle_limits"] = OracleLimits(**_known_fields(OracleLimits, limits, "oracle_limits"))

    for name in PATH_FIELDS:
        value = data.get(name)
        if value is None:
            continue
        path = Path(value)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        data[name] = path

    config = RunConfig(**data)
    validate_run_config(config)
    return config


def validate_run_config(config: RunConfig) -> None:
    choices = {
        "command": (config.command, COMMANDS),
        "format": (config.format, FORMATS),
        "oracle": (config.oracle, ORACLE_KINDS),
        "filter": (config.filter, KIND_FILTERS),
    }
    for name, (value, allowed) in choices.items():
        if value not in allowed:
            raise ConfigError(f"{name} must be one of {', '.join(allowed)}, got {value!r}")
    if config.workers < 1:
        raise ConfigError(f"workers must be at least 1, got {config.workers}")


def load_run_config(path: str | Path) -> RunConfig:
    config_path = Path(path)
    return run_config_from_mapping(_read_mapping(config_path), config_path.resolve().parent)


def run_config_to_mapping(
    config: RunConfig, root_path: Path | None = None, prefer_relative: bool = True
) -> dict[str, Any]:
    data = convert_for_output(dataclasses.asdict(config))
    for name in PATH_FIELDS:
        data[name] = maybe_relative(data[name], root_path, prefer_relative)
    return data


def save_run_config(config: RunConfig, path: str | Path, prefer_relative: bool = True) -> None:
    """Write YAML, keeping paths under the config's directory relative."""
    output_path = Path(path)
    data = run_config_to_mapping(config, output_path.resolve().parent, prefer_relative)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with output_path.open("w", encoding="utf-8") as handle:
        yaml.safe_dump(data, handle, sort_keys=False)
