"""Experiment configuration and run reports.

Settings resolve in order: built-in defaults, a ``key = value`` config file,
``WORKBENCH_<KEY>`` environment variables, then command-line flags.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

SCHEMA_VERSION = 1
ENV_PREFIX = "WORKBENCH_"


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def load_config(path: str | Path | None) -> dict[str, str]:
    if path is None:
        return {}
    return parse_config_text(Path(path).read_text(encoding="utf-8"), str(path))


def env_overrides(environ: Mapping[str, str] | None = None) -> dict[str, str]:
    environ = os.environ if environ is None else environ
    return {k[len(ENV_PREFIX):].lower(): v for k, v in environ.items() if k.startswith(ENV_PREFIX)}


def coerce(value: Any, like: Any) -> Any:
    """Convert a string from a file or the environment to the type of the built-in default."""
    if not isinstance(value, str) or like is None or isinstance(like, str):
        return value
    if isinstance(like, bool):
        return value.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(like, int):
        return int(value)
    if isinstance(like, float):
        return float(value)
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: Mapping[str, Any]

    def to_dict(self) -> dict:
        return {"command": self.command, "params": {k: _plain(v) for k, v in sorted(self.params.items())}}


def _plain(v):
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


@dataclass
class RunReport:
    config: ExperimentConfig
    result: Any = None
    artifacts: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    version: str = ""

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "tool_version": self.version,
                "config": self.config.to_dict(), "result": self.result,
                "artifacts": list(self.artifacts), "timings": dict(self.timings)}

    def to_json(self, with_timings: bool = True) -> str:
        d = self.to_dict()
        if not with_timings:
            d.pop("timings")
        return json.dumps(d, indent=1, sort_keys=True, default=str)
