"""Experiment configuration: presets, flat key = value files, validation."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields

from ..isa import ANCESTOR_CORE, MAX_GENOME_LENGTH
from ..population import EQUAL_SHARE, MERIT_SCALED, SCHEDULER_MODES

REFERENCE = "reference"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment; ``replicates`` runs share everything but the seed.

    ``ancestor`` is ``"reference"`` (the hand-written replicator, padded to
    ``length``), a genome file, or a finished run directory whose
    ``dominant.genome`` is reused. ``environment`` is a complexity name or an
    environment file.
    """

    preset: str = "custom"
    environment: str = "simple"
    scheduler: str = MERIT_SCALED
    fixed_length: bool = False
    length: int = 20
    ancestor: str | None = REFERENCE
    rate: float = 0.0075
    ins_rate: float = 0.05
    del_rate: float = 0.05
    capacity: int = 400
    updates: int = 10000
    replicates: int = 5
    seed: int = 0
    stats_interval: int = 10
    neutrality_interval: int = 500
    out_dir: str | None = None

    def __post_init__(self):
        validate(self)

    @property
    def name(self) -> str:
        return self.preset

    def output_dir(self) -> str:
        return self.out_dir if self.out_dir is not None else f"runs/{self.preset}"

    def replace(self, **changes) -> "ExperimentConfig":
        return with_overrides(self, **changes)


def _preset_table() -> dict[str, dict]:
    base = dict(scheduler=MERIT_SCALED, fixed_length=False, length=20, ancestor=REFERENCE,
                rate=0.0075)
    fixed = dict(environment="complex", scheduler=MERIT_SCALED, fixed_length=True, length=100,
                 ancestor=REFERENCE)
    return {
        # the evolved ancestor for set-i is supplied by the user (ancestor=...)
        "set-i": dict(environment="simple", scheduler=EQUAL_SHARE, fixed_length=False,
                      length=20, ancestor=None, rate=0.0075),
        "set-ii": dict(base, environment="simple"),
        "set-iii": dict(base, environment="medium"),
        "set-iv": dict(base, environment="complex"),
        "set-v": dict(fixed, rate=0.005),
        "set-vi": dict(fixed, rate=0.010),
        "set-vii": dict(fixed, rate=0.015),
    }


PRESETS = _preset_table()
DEFINING_FIELDS = ("environment", "scheduler", "fixed_length", "length", "ancestor", "rate")
KEYS = tuple(f.name for f in fields(ExperimentConfig))
ALIASES = {"R": "rate", "N": "capacity"}


def validate(cfg: ExperimentConfig) -> None:
    def bad(key, msg):
        raise ConfigError(f"{key}: {msg}")

    if cfg.preset != "custom" and cfg.preset not in PRESETS:
        bad("preset", f"unknown preset {cfg.preset!r}")
    if cfg.scheduler not in SCHEDULER_MODES:
        bad("scheduler", f"must be one of {', '.join(SCHEDULER_MODES)}")
    if not cfg.environment:
        bad("environment", "empty")
    if not ANCESTOR_CORE <= cfg.length <= MAX_GENOME_LENGTH:
        bad("length", f"must be in [{ANCESTOR_CORE}, {MAX_GENOME_LENGTH}]")
    for key in ("rate", "ins_rate", "del_rate"):
        v = getattr(cfg, key)
        if not 0.0 <= v <= 1.0:
            bad(key, f"{v} outside [0, 1]")
    if cfg.capacity < 2:
        bad("capacity", "must be at least 2")
    if cfg.updates < 1:
        bad("updates", "must be at least 1")
    if cfg.replicates < 1:
        bad("replicates", "must be at least 1")
    if cfg.seed < 0:
        bad("seed", "must be non-negative")
    if cfg.stats_interval < 1:
        bad("stats_interval", "must be at least 1")
    if cfg.neutrality_interval < 0:
        bad("neutrality_interval", "must be non-negative (0 disables)")
    if cfg.preset in PRESETS:
        for key, want in PRESETS[cfg.preset].items():
            have = getattr(cfg, key)
            if cfg.preset == "set-i" and key == "ancestor":
                continue
            if have != want:
                bad(key, f"conflicts with preset {cfg.preset} ({want!r})")


def _coerce(key: str, raw: str):
    kind = {f.name: f.type for f in fields(ExperimentConfig)}[key]
    text = raw.strip()
    try:
        if kind == "bool":
            low = text.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(f"not a boolean: {text!r}")
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    if key in ("ancestor", "out_dir") and text.lower() in ("", "none"):
        return None
    return text


def _parse_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = ALIASES.get(key.strip(), key.strip())
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value.strip()
    return pairs


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    return ExperimentConfig(preset=name, **PRESETS[name])


def load_config(source: str) -> ExperimentConfig:
    """A preset name (``set-i`` ... ``set-vii``) or flat ``key = value`` text.

    Text may name a ``preset`` and override its non-defining fields.
    """
    if source.strip() in PRESETS:
        return preset_config(source.strip())
    pairs = _parse_pairs(source)
    values = {k: _coerce(k, v) for k, v in pairs.items()}
    preset = values.pop("preset", "custom")
    if preset == "custom":
        return ExperimentConfig(**values)
    return with_overrides(preset_config(preset), **values)


def load_config_file(path) -> ExperimentConfig:
    with open(path) as fh:
        return load_config(fh.read())


def with_overrides(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    """``cfg`` with ``changes`` applied and re-validated."""
    for key in changes:
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
    try:
        return dataclasses.replace(cfg, **changes)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def format_config(cfg: ExperimentConfig, include_out_dir: bool = True) -> str:
    lines = []
    for key in KEYS:
        if key == "out_dir" and not include_out_dir:
            continue
        value = getattr(cfg, key)
        if value is None:
            value = "none"
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"

