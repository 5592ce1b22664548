"""
Configuration loading for linkspace.

Defines dataclasses for the config schema and utilities for loading
and validating JSON config files.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

CONFIG_VERSION = 1
DEFAULT_CONFIG_DIR = Path.home() / ".linkspace"
DEFAULT_CONFIG_PATH = DEFAULT_CONFIG_DIR / "config.json"

# Allow tests to monkeypatch CONFIG_PATH without needing to patch Path.home().
CONFIG_DIR = DEFAULT_CONFIG_DIR
CONFIG_PATH = DEFAULT_CONFIG_PATH

MIN_RESOLUTION = 1000


class ConfigError(ValueError):
    """Raised when the configuration file is invalid."""


@dataclass
class SweepConfig:
    """One-parameter sweep settings for the K33 stages."""

    resolution: int = 20000
    workers: int = 1


@dataclass
class RealizeConfig:
    """Multi-start least-squares realizer settings."""

    restarts: int = 200
    seed: int = 0


@dataclass
class ComponentsConfig:
    """Sampling-based component counter settings."""

    samples: int = 500
    knots: int = 32
    descent_iterations: int = 100
    neighbors: int = 12


@dataclass
class RenderConfig:
    """SVG output settings."""

    scale: int = 40  # pixels per unit length


@dataclass
class LinkspaceConfig:
    """Top-level configuration container for linkspace."""

    version: int = CONFIG_VERSION
    sweep: SweepConfig = field(default_factory=SweepConfig)
    realize: RealizeConfig = field(default_factory=RealizeConfig)
    components: ComponentsConfig = field(default_factory=ComponentsConfig)
    render: RenderConfig = field(default_factory=RenderConfig)


def default_config() -> LinkspaceConfig:
    """Return a new config instance with default values."""

    return LinkspaceConfig()


def load_config(config_path: Path | None = None) -> LinkspaceConfig:
    """Load config from disk, using defaults if missing."""

    path = _resolve_config_path(config_path)
    if not path.exists():
        return default_config()

    data = _read_json(path)
    return _parse_config(data)


def parse_config(data: dict) -> LinkspaceConfig:
    """Parse and validate a config dictionary."""

    return _parse_config(data)


def save_config(config: LinkspaceConfig, config_path: Path | None = None) -> Path:
    """Persist config to disk and return the path written."""

    path = _resolve_config_path(config_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(asdict(config), indent=2, sort_keys=True)
    path.write_text(payload + "\n")
    return path


def resolve_config_path(config_path: Path | None = None) -> Path:
    """Resolve the config path used for `load_config`/`save_config`."""

    return _resolve_config_path(config_path)


def _resolve_config_path(config_path: Path | None) -> Path:
    if config_path is not None:
        return config_path.expanduser()

    # If tests have monkeypatched CONFIG_PATH, respect it and avoid touching user paths.
    if CONFIG_PATH != DEFAULT_CONFIG_PATH:
        return CONFIG_PATH.expanduser()

    from .paths import resolve_data_dir

    return (resolve_data_dir() / "config.json").expanduser()


def _read_json(path: Path) -> dict:
    try:
        raw = path.read_text()
    except OSError as exc:
        raise ConfigError(f"Unable to read config file: {path}") from exc

    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Invalid JSON in config file: {path}") from exc

    if not isinstance(data, dict):
        raise ConfigError("Config file must contain a JSON object")

    return data


def _parse_config(data: dict) -> LinkspaceConfig:
    _validate_keys(
        data,
        {"version", "sweep", "realize", "components", "render"},
        "config",
    )
    return LinkspaceConfig(
        version=_read_version(data.get("version")),
        sweep=_parse_sweep(data.get("sweep")),
        realize=_parse_realize(data.get("realize")),
        components=_parse_components(data.get("components")),
        render=_parse_render(data.get("render")),
    )


def _read_version(value: object) -> int:
    if value is None:
        return CONFIG_VERSION
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError("config.version must be an integer")
    if value != CONFIG_VERSION:
        raise ConfigError(
            f"Unsupported config version {value}; expected {CONFIG_VERSION}"
        )
    return value


def _parse_sweep(value: object) -> SweepConfig:
    data = _ensure_dict(value, "sweep")
    _validate_keys(data, {"resolution", "workers"}, "sweep")
    return SweepConfig(
        resolution=_optional_int(
            data.get("resolution"),
            "sweep.resolution",
            SweepConfig.resolution,
            min_value=MIN_RESOLUTION,
        ),
        workers=_optional_int(data.get("workers"), "sweep.workers", SweepConfig.workers),
    )


def _parse_realize(value: object) -> RealizeConfig:
    data = _ensure_dict(value, "realize")
    _validate_keys(data, {"restarts", "seed"}, "realize")
    return RealizeConfig(
        restarts=_optional_int(
            data.get("restarts"), "realize.restarts", RealizeConfig.restarts
        ),
        seed=_optional_int(
            data.get("seed"), "realize.seed", RealizeConfig.seed, min_value=0
        ),
    )


def _parse_components(value: object) -> ComponentsConfig:
    data = _ensure_dict(value, "components")
    _validate_keys(
        data,
        {"samples", "knots", "descent_iterations", "neighbors"},
        "components",
    )
    return ComponentsConfig(
        samples=_optional_int(
            data.get("samples"), "components.samples", ComponentsConfig.samples
        ),
        knots=_optional_int(
            data.get("knots"), "components.knots", ComponentsConfig.knots, min_value=2
        ),
        descent_iterations=_optional_int(
            data.get("descent_iterations"),
            "components.descent_iterations",
            ComponentsConfig.descent_iterations,
        ),
        neighbors=_optional_int(
            data.get("neighbors"), "components.neighbors", ComponentsConfig.neighbors
        ),
    )


def _parse_render(value: object) -> RenderConfig:
    data = _ensure_dict(value, "render")
    _validate_keys(data, {"scale"}, "render")
    return RenderConfig(
        scale=_optional_int(data.get("scale"), "render.scale", RenderConfig.scale),
    )


def _ensure_dict(value: object, path: str) -> dict:
    # Sections may be omitted entirely.
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{path} must be a JSON object")
    return value


def _validate_keys(data: dict, allowed: set[str], path: str) -> None:
    unknown = set(data.keys()) - allowed
    if unknown:
        joined = ", ".join(sorted(unknown))
        raise ConfigError(f"Unknown keys in {path}: {joined}")


def _optional_int(value: object, path: str, default: int, min_value: int = 1) -> int:
    if value is None:
        return default
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{path} must be an integer")
    if value < min_value:
        raise ConfigError(f"{path} must be at least {min_value}")
    return value


__all__ = [
    "ComponentsConfig",
    "ConfigError",
    "LinkspaceConfig",
    "RealizeConfig",
    "RenderConfig",
    "SweepConfig",
    "CONFIG_DIR",
    "CONFIG_PATH",
    "CONFIG_VERSION",
    "DEFAULT_CONFIG_DIR",
    "DEFAULT_CONFIG_PATH",
    "MIN_RESOLUTION",
    "default_config",
    "load_config",
    "parse_config",
    "resolve_config_path",
    "save_config",
]
