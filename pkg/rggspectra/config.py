from __future__ import annotations

from pathlib import Path
from typing import Any, Literal
import logging
import math

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError, DataIOError
from .geometry import Metric, lattice_side, unit_ball_volume

logger = logging.getLogger(__name__)

Regime = Literal["connectivity", "thermodynamic", "dense"]

DEFAULT_ALPHA = {"connectivity": 0.0, "thermodynamic": 0.001, "dense": 0.0}


class RegimeConfig(BaseModel):
    """
    Validated experiment configuration.

    The radius for each n follows the regime's scaling rule:
        connectivity: r_n = (log^{3/2}(n) / n)^(1/d), or (c log n / (theta n))^(1/d) when c is set
        thermodynamic: r_n = (gamma / n)^(1/d)
        dense: r_n = (rho / theta)^(1/d), i.e. a_n = rho n
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    regime: Regime
    n: list[int] = Field(default_factory=lambda: [512], min_length=1)
    d: int = Field(1, ge=1)
    metric: Literal["euclidean", "chebyshev", "lp"] = "euclidean"
    p: float | None = None
    trials: int = Field(10, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    alpha: float = Field(0.0, ge=0.0)
    gamma: float = 12.0
    c: float | None = Field(None, gt=0.0)
    rho: float = Field(0.5, gt=0.0, le=1.0)
    tol: float = Field(1e-9, gt=0.0)
    workers: int = Field(1, ge=1)
    eigen_cap: int = Field(8192, ge=1)
    grid_points: int = Field(401, ge=2)
    samples: int = Field(30000, ge=2)
    rgg: bool = True

    @model_validator(mode="before")
    @classmethod
    def _regime_defaults(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("alpha") is None:
            data = dict(data)
            data["alpha"] = DEFAULT_ALPHA.get(data.get("regime"), 0.0)
        return data

    @field_validator("n", mode="before")
    @classmethod
    def _wrap_single_n(cls, value: Any) -> Any:
        return [value] if isinstance(value, int) else value

    @model_validator(mode="after")
    def _check_ranges(self) -> RegimeConfig:
        Metric.parse(self.metric, self.p)
        if self.regime == "thermodynamic" and not self.gamma >= 2:
            raise ValueError(f"gamma must be >= 2, got {self.gamma}")
        for n in self.n:
            if n < 1:
                raise ValueError(f"n must be >= 1, got {n}")
            lattice_side(n, self.d)
            r = self.radius(n)
            if not 0.0 < r <= 0.5:
                raise ValueError(f"radius for n={n} is {r:.6g}, outside (0, 1/2]")
        return self

    @property
    def metric_spec(self) -> Metric:
        return Metric.parse(self.metric, self.p)

    @property
    def theta(self) -> float:
        return unit_ball_volume(self.d, self.metric_spec)

    def radius(self, n: int) -> float:
        if self.regime == "connectivity":
            if self.c is None:
                scale = math.log(n) ** 1.5 / n
            else:
                scale = self.c * math.log(n) / (self.theta * n)
        elif self.regime == "thermodynamic":
            scale = self.gamma / n
        else:
            scale = self.rho / self.theta
        return scale ** (1.0 / self.d)

    def nominal_degree(self, n: int) -> float:
        """a_n = theta^(d) n r_n^d."""
        return self.theta * n * self.radius(n) ** self.d

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


def _format_validation_error(exc: ValidationError) -> str:
    unknown: list[str] = []
    problems: list[str] = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"])
        if error["type"] == "extra_forbidden":
            unknown.append(location)
        elif location:
            problems.append(f"{location}: {error['msg']}")
        else:
            problems.append(str(error["msg"]).removeprefix("Value error, "))
    parts = []
    if unknown:
        parts.append("unknown keys: " + ", ".join(sorted(unknown)))
    parts.extend(problems)
    return "; ".join(parts)


def parse_config(text: str) -> RegimeConfig:
    """
    Parse a JSON (or YAML) config document into a validated RegimeConfig.

    Unknown keys and out-of-range values raise ConfigError naming them.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid JSON/YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a key-value mapping")
    try:
        return RegimeConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_validation_error(exc)) from exc


def load_config(path: Path) -> RegimeConfig:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataIOError(path, exc.strerror or exc) from exc
    cfg = parse_config(text)
    logger.debug("loaded %s regime config from %s", cfg.regime, path)
    return cfg


def with_overrides(cfg: RegimeConfig, **changes: Any) -> RegimeConfig:
    """Copy of `cfg` with some keys replaced, validated like a fresh document."""
    data = cfg.echo()
    data.update({key: value for key, value in changes.items() if value is not None})
    try:
        return RegimeConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_validation_error(exc)) from exc
