"""Run configuration: defaults < config file < command-line flags."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .averages import METHODS
from .errors import UsageError
from .quadrature import QuadratureConfig
from .sampler import DEFAULT_THRESHOLD
from .weights import PsiSpec

ENSEMBLES = ("ginoe", "ginue")
OUTPUT_FORMATS = ("json", "csv")
METHOD_ALIASES = {
    "mc": "monte_carlo",
    "det": "ginue_det",
    "orth": "ginue_orth",
}


@dataclass(frozen=True)
class McConfig:
    samples: int = 100_000
    seed: int = 0
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise UsageError("samples must be positive")
        if self.threshold <= 0:
            raise UsageError("threshold must be positive")


@dataclass(frozen=True)
class RunConfig:
    ensemble: str = "ginoe"
    n: int = 2
    psi: str = "one"
    method: str = "auto"
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    mc: McConfig = field(default_factory=McConfig)
    output_format: str = "json"

    def __post_init__(self) -> None:
        if self.ensemble not in ENSEMBLES:
            raise UsageError(f"ensemble must be one of {ENSEMBLES}")
        if self.n < 1:
            raise UsageError("n must be at least 1")
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(f"output format must be one of {OUTPUT_FORMATS}")
        PsiSpec.parse(self.psi)
        method = METHOD_ALIASES.get(self.method, self.method)
        if method != "auto" and method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        object.__setattr__(self, "method", method)

    @property
    def psi_spec(self) -> PsiSpec:
        return PsiSpec.parse(self.psi)

    def resolved(self) -> "RunConfig":
        """Replace method 'auto' by the ensemble's default route."""
        if self.method != "auto":
            return self
        return replace(self, method="pfaffian" if self.ensemble == "ginoe" else "ginue_det")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["quadrature"] = self.quadrature.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunConfig":
        d = dict(d)
        unknown = set(d) - {f.name for f in fields(cls)}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if "quadrature" in d:
            d["quadrature"] = QuadratureConfig.from_dict(d["quadrature"])
        if "mc" in d:
            extra = set(d["mc"]) - {f.name for f in fields(McConfig)}
            if extra:
                raise UsageError(f"unknown mc keys: {sorted(extra)}")
            d["mc"] = McConfig(**d["mc"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise UsageError(str(exc)) from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from None
        if not isinstance(payload, dict):
            raise UsageError("config must be a JSON object")
        return cls.from_dict(payload)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        return cls.from_json(text)


def merge(base: RunConfig, overrides: dict[str, Any]) -> RunConfig:
    """Apply non-None overrides; nested keys use 'quadrature.x' / 'mc.x'."""
    top: dict[str, Any] = {}
    quad: dict[str, Any] = {}
    mc: dict[str, Any] = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key.startswith("quadrature."):
            quad[key.split(".", 1)[1]] = value
        elif key.startswith("mc."):
            mc[key.split(".", 1)[1]] = value
        else:
            top[key] = value
    try:
        return replace(
            base,
            quadrature=replace(base.quadrature, **quad),
            mc=replace(base.mc, **mc),
            **top,
        )
    except TypeError as exc:
        raise UsageError(str(exc)) from None
