"""Pipeline configuration: flat key=value file with CLI-flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, replace


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    max_input_length: int = 256
    embedding_dim: int = 768  # D before whitening
    whitened_dim: int = 256  # d after whitening
    lam: float = 0.7
    top_n: int = 10
    k: int = 5
    seed: int = 0

    _KEYS = {
        "max_input_length": ("max_input_length", int),
        "D": ("embedding_dim", int),
        "d": ("whitened_dim", int),
        "lambda": ("lam", float),
        "top_n": ("top_n", int),
        "k": ("k", int),
        "seed": ("seed", int),
    }

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        config = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in cls._KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                field_name, cast = cls._KEYS[key]
                try:
                    config = replace(config, **{field_name: cast(value)})
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
        return config

    def override(self, **kwargs) -> "PipelineConfig":
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **updates) if updates else self
