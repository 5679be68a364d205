"""Forecast request/result types and the single ``forecast`` entry point.

Backends come in two flavours. A :class:`NumericBackend` maps a training
series straight to ``horizon`` numbers (classical baselines, numeric
mocks). A :class:`TextBackend` returns raw completions for a prompt; the
forecast layer builds the prompt, decodes every completion, fits it to the
horizon and aggregates samples by pointwise median.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from ..codec import (DEFAULT_PERCENTILE, DEFAULT_PRECISION, decode_digits, encode_digits,
                     paraphrase, rescale_for_tokens, reverse_paraphrase)
from ..errors import AllSamplesMalformed, BadParams, PartialSamples, TsllmError
from ..prompts import (KnowledgeRegistry, PromptBundle, build_forecast_prompt,
                       build_knowledge_prompt, build_paraphrase_prompt, default_registry)
from ..series import TimeSeries

MODES = ("digits", "paraphrase")
SHORT_POLICIES = ("repeat_last", "fail")


@dataclass(frozen=True)
class PromptOptions:
    precision: int = DEFAULT_PRECISION
    rescale: bool = True
    percentile: float = DEFAULT_PERCENTILE
    target: float = 1.0
    knowledge_key: Optional[str] = None
    knowledge_as_system: bool = False
    label: str = "value"
    fmt_decimals: int = 2


@dataclass(frozen=True)
class Sampling:
    num_samples: int = 10
    temperature: float = 0.7
    seed: Optional[int] = None
    short_policy: str = "repeat_last"

    def __post_init__(self):
        if self.num_samples < 1:
            raise BadParams("num_samples must be >= 1")
        if self.temperature < 0:
            raise BadParams("temperature must be >= 0")
        if self.short_policy not in SHORT_POLICIES:
            raise BadParams(f"short_policy must be one of {SHORT_POLICIES}")


@dataclass(frozen=True)
class ForecastRequest:
    train: TimeSeries
    horizon: int
    mode: str = "digits"
    prompt: PromptOptions = field(default_factory=PromptOptions)
    sampling: Sampling = field(default_factory=Sampling)

    def __post_init__(self):
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise BadParams("horizon must be a positive integer")
        if self.mode not in MODES:
            raise BadParams(f"mode must be one of {MODES}")


@dataclass
class ForecastResult:
    point: np.ndarray
    samples: list
    forecaster_id: str
    prompt_hash: Optional[str] = None
    raw_responses: Optional[list] = None
    failures: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    @property
    def partial(self) -> bool:
        return bool(self.failures)

    def to_dict(self) -> dict:
        return {
            "forecaster_id": self.forecaster_id,
            "point": [float(v) for v in self.point],
            "samples": [[float(v) for v in s] for s in self.samples],
            "prompt_hash": self.prompt_hash,
            "raw_responses": self.raw_responses,
            "failures": [list(f) for f in self.failures],
            "settings": self.settings,
        }


class Backend:
    id: str = "backend"


class NumericBackend(Backend):
    def predict(self, train: TimeSeries, horizon: int) -> np.ndarray:
        raise NotImplementedError


class TextBackend(Backend):
    def complete(self, bundle: PromptBundle, n: int, temperature: float = 0.7,
                 seed: Optional[int] = None) -> list[str]:
        raise NotImplementedError


def median_point(samples) -> np.ndarray:
    return np.median(np.asarray(samples, dtype=float), axis=0)


def fit_to_horizon(values: np.ndarray, horizon: int, policy: str = "repeat_last") -> np.ndarray:
    """Truncate long decodes; extend short ones by repeating the last value."""
    values = np.asarray(values, dtype=float)
    if values.size >= horizon:
        return values[:horizon]
    if policy == "fail" or values.size == 0:
        raise ValueError(f"completion has {values.size} values, need {horizon}")
    return np.concatenate([values, np.full(horizon - values.size, values[-1])])


def prepare_prompt(req: ForecastRequest, registry: Optional[KnowledgeRegistry] = None
                   ) -> tuple[PromptBundle, Callable[[str], np.ndarray]]:
    """Build the prompt for ``req`` and the decoder that reads its completions."""
    opts = req.prompt
    values = req.train.values
    if req.mode == "digits":
        if opts.rescale:
            scaled, scale = rescale_for_tokens(values, opts.percentile, opts.target)
        else:
            scaled, scale = values, None
        enc = encode_digits(scaled, opts.precision, scale=scale)
        subject = enc

        def decode(text: str) -> np.ndarray:
            v = decode_digits(text, opts.precision, sep=enc.sep, digit_sep=enc.digit_sep)
            return v if scale is None else scale.invert(v)
    else:
        para = paraphrase(values, opts.label, opts.fmt_decimals)
        subject = para
        last = para.values()[-1]

        def decode(text: str) -> np.ndarray:
            v = reverse_paraphrase(text)
            tol = 0.5 * 10.0 ** (-opts.fmt_decimals)
            if abs(v[0] - last) > tol + 1e-12 * max(1.0, abs(last)):
                # the model restarted somewhere else; keep every value it produced
                return v
            return v[1:]

    if opts.knowledge_key:
        reg = registry if registry is not None else default_registry()
        bundle = build_knowledge_prompt(opts.knowledge_key, reg, subject, req.horizon,
                                        as_system=opts.knowledge_as_system)
    elif req.mode == "digits":
        bundle = build_forecast_prompt(subject, req.horizon)
    else:
        bundle = build_paraphrase_prompt(subject, req.horizon)
    return bundle, decode


def forecast(req: ForecastRequest, backend: Backend,
             registry: Optional[KnowledgeRegistry] = None) -> ForecastResult:
    """Produce ``req.horizon`` forecasts from ``backend``.

    Raises AllSamplesMalformed when no completion decodes; when only some
    fail, a :class:`PartialSamples` warning is issued and the failures are
    listed on the result.
    """
    settings = {"aggregation": "median"}
    if isinstance(backend, NumericBackend):
        values = np.asarray(backend.predict(req.train, req.horizon), dtype=float)
        if values.shape != (req.horizon,) or not np.all(np.isfinite(values)):
            raise AllSamplesMalformed(f"{backend.id} returned {values.shape} values, "
                                      f"expected {req.horizon} finite values")
        return ForecastResult(values.copy(), [values.copy()], backend.id, settings=settings)
    if not isinstance(backend, TextBackend):
        raise TypeError(f"unsupported backend type {type(backend).__name__}")

    s = req.sampling
    bundle, decode = prepare_prompt(req, registry)
    responses = list(backend.complete(bundle, s.num_samples, s.temperature, s.seed))
    samples, failures = [], []
    for i, text in enumerate(responses):
        try:
            v = fit_to_horizon(decode(text), req.horizon, s.short_policy)
            if not np.all(np.isfinite(v)):
                raise ValueError("non-finite value")
        except (TsllmError, ValueError) as exc:
            failures.append((i, f"{type(exc).__name__}: {exc}"))
            continue
        samples.append(v)
    settings.update(num_samples=s.num_samples, temperature=s.temperature,
                    short_policy=s.short_policy, mode=req.mode, prompt=asdict(req.prompt))
    if not samples:
        raise AllSamplesMalformed(f"none of {len(responses)} completions decoded")
    if failures:
        warnings.warn(PartialSamples(f"{len(failures)} of {len(responses)} completions "
                                     "failed to decode"), stacklevel=2)
    return ForecastResult(median_point(samples), samples, backend.id, bundle.hash,
                          responses, failures, settings)
