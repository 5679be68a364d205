"""Experiment configuration with a strict JSON round trip."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional, Union

from ..cache import canonical_json, sha256_text
from ..errors import ConfigError, UnknownBackend
from ..forecasters.baselines import BASELINE_IDS
from ..forecasters.base import MODES, SHORT_POLICIES
from ..series import SPLIT_CONVENTIONS

MOCK_IDS = ("echo_seasonal", "recency_weighted", "scripted", "echo_period")
REMOTE_IDS = ("chat",)
BACKEND_IDS = BASELINE_IDS + MOCK_IDS + REMOTE_IDS
SWEEP_PRESETS = ("single_period", "multi_period")


def _build(cls, data: Any, where: str):
    if isinstance(data, cls):
        return data
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be a JSON object")
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    return cls(**data)


@dataclass(frozen=True)
class DatasetSpec:
    """Exactly one of ``path``, ``bundled``, ``synth`` or ``sweep``.

    ``synth`` holds a SynthConfig dict; ``sweep`` holds
    ``{"preset": "single_period" | "multi_period", "count": 10, "seed": 0}``.
    """

    path: Optional[str] = None
    bundled: Optional[str] = None
    synth: Optional[dict] = None
    sweep: Optional[dict] = None
    value_column: Optional[str] = None
    timestamp_column: Optional[str] = None
    key: Optional[str] = None
    period: Optional[int] = None

    def __post_init__(self):
        given = [k for k in ("path", "bundled", "synth", "sweep") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ConfigError(f"dataset needs exactly one source, got {given or 'none'}")
        if self.sweep is not None:
            preset = self.sweep.get("preset")
            if preset not in SWEEP_PRESETS:
                raise ConfigError(f"sweep preset must be one of {SWEEP_PRESETS}")
            if set(self.sweep) - {"preset", "count", "seed"}:
                raise ConfigError("sweep accepts only preset, count and seed")


@dataclass(frozen=True)
class ForecasterSpec:
    backend: str = "naive_seasonal"
    params: dict = field(default_factory=dict)
    model: Optional[str] = None
    endpoint: Optional[str] = None
    api_key_env: str = "TSLLM_API_KEY"
    num_samples: int = 10
    temperature: float = 0.7
    sample_seed: Optional[int] = None
    short_policy: str = "repeat_last"
    max_concurrency: int = 4

    def __post_init__(self):
        if self.backend not in BACKEND_IDS:
            raise UnknownBackend(f"unknown backend {self.backend!r}; known: {', '.join(BACKEND_IDS)}")
        if self.backend in REMOTE_IDS and not (self.model and self.endpoint):
            raise ConfigError("a remote backend needs both model and endpoint")
        if self.num_samples < 1 or self.temperature < 0:
            raise ConfigError("num_samples must be >= 1 and temperature >= 0")
        if self.short_policy not in SHORT_POLICIES:
            raise ConfigError(f"short_policy must be one of {SHORT_POLICIES}")


@dataclass(frozen=True)
class PromptSpec:
    mode: str = "digits"
    knowledge_key: Optional[str] = None
    knowledge_as_system: bool = False
    precision: int = 2
    percentile: float = 95.0
    rescale: bool = True
    label: str = "value"
    fmt_decimals: int = 2

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class AnalysisSpec:
    forecast: bool = True
    strength: bool = True
    compare_strengths: bool = False
    perturb: bool = False
    window_fraction: float = 0.1
    stride: Optional[int] = None
    mu: float = 0.0
    sigma: float = 0.2
    period: bool = False
    repeats: int = 10


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetSpec
    forecaster: ForecasterSpec = field(default_factory=ForecasterSpec)
    prompt: PromptSpec = field(default_factory=PromptSpec)
    analysis: AnalysisSpec = field(default_factory=AnalysisSpec)
    split: float = 0.8
    split_convention: str = "count"
    seed: int = 0
    out_dir: str = "runs"
    cache_dir: Optional[str] = None

    def __post_init__(self):
        parts = {"dataset": DatasetSpec, "forecaster": ForecasterSpec, "prompt": PromptSpec,
                 "analysis": AnalysisSpec}
        for name, cls in parts.items():
            object.__setattr__(self, name, _build(cls, getattr(self, name), name))
        if not 0.0 < self.split < 1.0:
            raise ConfigError("split must lie in (0, 1)")
        if self.split_convention not in SPLIT_CONVENTIONS:
            raise ConfigError(f"split_convention must be one of {SPLIT_CONVENTIONS}")
        if self.dataset.path is not None and not Path(self.dataset.path).is_file():
            raise ConfigError(f"dataset file {self.dataset.path!r} does not exist")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        if "dataset" not in data:
            raise ConfigError("config needs a dataset")
        return _build(cls, data, "config")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except ValueError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def experiment_id(self) -> str:
        """Content hash of everything except where output goes."""
        d = self.to_dict()
        d.pop("out_dir")
        d.pop("cache_dir")
        return sha256_text(canonical_json(d))[:16]
