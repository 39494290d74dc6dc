"""Run configuration: defaults, a JSON file named by SYNCGAME_CONFIG, then flags."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

ENV_VAR = "SYNCGAME_CONFIG"


@dataclass(frozen=True)
class Config:
    degree: int = 6
    rule_cap: int = 50_000
    tol: float = 1e-10
    support_eps: float = 1e-6
    threads: int = 1
    format: str = "json"

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("degree bound must be at least 2")
        if self.rule_cap < 1:
            raise ValueError("rule_cap must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.support_eps > self.tol:
            raise ValueError("support_eps must exceed tol")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.format not in ("json", "text"):
            raise ValueError("format must be 'json' or 'text'")

    def to_json(self) -> dict:
        return asdict(self)


def load_config(overrides: dict | None = None, environ=None) -> Config:
    environ = os.environ if environ is None else environ
    cfg = Config()
    path = environ.get(ENV_VAR)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in fields(Config)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        cfg = replace(cfg, **data)
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg
