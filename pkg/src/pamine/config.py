"""Pipeline configuration: lexicon paths, thresholds, seeds.

A single TOML file overrides the bundled defaults; an unset field keeps the
default. Paths are resolved relative to the config file's directory.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .data import data_path

ENV_CONFIG = "PAMINE_CONFIG"

_PATH_FIELDS = ("class_rules", "attribute_cues", "type_lexicon_dir",
                "noun_attribute", "tag_lexicon", "stopwords",
                "abbreviations", "embeddings")


class ConfigError(ValueError):
    """Raised for invalid configuration files or values."""


@dataclass(frozen=True)
class PipelineConfig:
    class_rules: Path
    attribute_cues: Path
    type_lexicon_dir: Path
    noun_attribute: Path
    tag_lexicon: Path
    stopwords: Path
    abbreviations: Path
    embeddings: Path | None = None
    tau: float = 0.55
    threshold: float = 0.5
    alpha: float = 0.05
    l2: float = 1.0
    learning_rate: float = 0.1
    max_epochs: int = 500
    tol: float = 1e-6
    seed: int = 42
    folds: int = 5
    output_dir: Path = Path("out")

    @classmethod
    def default(cls) -> "PipelineConfig":
        return cls(
            class_rules=data_path("class_rules.tsv"),
            attribute_cues=data_path("attribute_cues.tsv"),
            type_lexicon_dir=data_path("ilp_types"),
            noun_attribute=data_path("noun_attribute.txt"),
            tag_lexicon=data_path("tags.tsv"),
            stopwords=data_path("stopwords.txt"),
            abbreviations=data_path("abbreviations.txt"),
        )

    def validate(self) -> "PipelineConfig":
        for name in _PATH_FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            if not Path(value).exists():
                raise ConfigError(f"{name}: no such file or directory: {value}")
        if not 0.0 < self.tau < 1.0:
            raise ConfigError(f"tau must lie in (0, 1), got {self.tau}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.threshold <= 1.0:
            raise ConfigError(f"threshold must lie in (0, 1], got {self.threshold}")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if self.max_epochs < 1 or self.learning_rate <= 0 or self.l2 < 0:
            raise ConfigError("invalid training hyperparameters")
        return self


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Load and validate a config file.

    With no explicit path, honors the PAMINE_CONFIG environment variable,
    else returns the bundled defaults.
    """
    if path is None:
        env = os.environ.get(ENV_CONFIG)
        if env:
            path = env
    config = PipelineConfig.default()
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML ({exc})") from exc
        known = {f.name for f in fields(PipelineConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
        updates = {}
        base = path.parent
        for key, value in raw.items():
            if key in _PATH_FIELDS or key == "output_dir":
                resolved = Path(value)
                if not resolved.is_absolute():
                    resolved = base / resolved
                updates[key] = resolved
            else:
                updates[key] = value
        try:
            config = replace(config, **updates)
        except TypeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return config.validate()
