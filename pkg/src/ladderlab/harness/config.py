"""Run configuration shared by the CLI and the sweep runner."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from ..energy import DEFAULT_GUARD_FRACTION, DEFAULT_K0, EXACT_TOLERANCE, Limits
from ..zeta_core import OmegaKind

CACHE_ENV = "LADDERLAB_CACHE_DIR"

DEFAULT_TOLERANCES = {
    "unit_operator": EXACT_TOLERANCE,
    "additivity": EXACT_TOLERANCE,
    "multiplicativity": EXACT_TOLERANCE,
    "orthogonality": EXACT_TOLERANCE,
    "canonical_factorization": EXACT_TOLERANCE,
    "corollary3": EXACT_TOLERANCE,
}


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 1."""


def default_cache_dir() -> Path:
    return Path.home() / ".cache" / "ladderlab"


@dataclass(frozen=True)
class RunConfig:
    omega: OmegaKind = OmegaKind.LOG_T
    t_anchor: float | None = None
    guard_fraction: float = DEFAULT_GUARD_FRACTION
    k0: int = DEFAULT_K0
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    cache_dir: Path = field(default_factory=default_cache_dir)
    threads: int = 1

    def __post_init__(self):
        try:
            object.__setattr__(self, "omega", OmegaKind.parse(self.omega))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not 0 < self.guard_fraction <= 0.5:
            raise ConfigError(f"guard_fraction={self.guard_fraction} must lie in (0, 0.5]")
        if int(self.k0) != self.k0 or self.k0 < 1:
            raise ConfigError(f"k0={self.k0} must be a positive integer")
        if int(self.threads) != self.threads or self.threads < 1:
            raise ConfigError(f"threads={self.threads} must be a positive integer")
        merged = dict(DEFAULT_TOLERANCES)
        merged.update(self.tolerances)
        for name, tol in merged.items():
            if not tol > 0:
                raise ConfigError(f"tolerance for {name} must be positive, got {tol}")
        object.__setattr__(self, "tolerances", merged)
        object.__setattr__(self, "cache_dir", Path(os.environ.get(CACHE_ENV) or self.cache_dir))
        if self.t_anchor is not None and not self.t_anchor >= 50.0:
            raise ConfigError(f"t_anchor={self.t_anchor} must be >= 50")

    @property
    def limits(self) -> Limits:
        return Limits(self.guard_fraction, int(self.k0))

    def tolerance(self, check_id: str) -> float:
        return self.tolerances.get(check_id, EXACT_TOLERANCE)

    def anchor_for(self, T: float) -> float:
        """Tables are anchored at T unless a fixed anchor below T is configured."""
        if self.t_anchor is None:
            return float(T)
        if self.t_anchor > T:
            raise ConfigError(f"t_anchor={self.t_anchor} lies above T={T}")
        return float(self.t_anchor)

    def updated(self, **changes: Any) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "cache_dir" in kwargs:
            kwargs["cache_dir"] = Path(kwargs["cache_dir"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def load_json(path: str | os.PathLike) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return data
