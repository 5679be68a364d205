"""Compose loading, splitting, forecasting and analysis into recorded runs.

A run directory looks like ``<out>/<experiment-id>/`` holding
``config.json``, ``record.json``, ``cache/`` (remote replies) and ``raw/``
(prompts and raw completions per record). Records are written with sorted
keys; everything except the ``timestamps`` entries is a pure function of
the config and the cache contents.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from .. import __version__
from ..analysis.metrics import correlation_matrix, metrics
from ..analysis.period import period_experiment
from ..analysis.perturb import counterfactual_sweep
from ..analysis.strengths import output_strength_comparison
from ..cache import ResponseCache
from ..errors import ConfigError, PipelineError, TsllmError, ZeroVariance
from ..forecasters.base import (Backend, ForecastRequest, PromptOptions, Sampling, TextBackend,
                                forecast, prepare_prompt)
from ..forecasters.baselines import BASELINE_IDS, BaselineBackend
from ..forecasters.llm import ChatCompletionBackend
from ..forecasters.mocks import EchoPeriod, EchoSeasonal, RecencyWeighted, Scripted
from ..periodogram import resolve_period
from ..prompts import known_periods
from ..series import TimeSeries, train_test_split
from ..stl import strength_report
from ..synth import SynthConfig, generate, multi_period_sweep, single_period_sweep
from .config import DatasetSpec, ExperimentConfig, ForecasterSpec
from .ingest import file_sha256, ingest_csv, load_bundled

log = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class ResultRecord:
    config: dict
    experiment_id: str
    dataset: dict
    split: dict
    metrics: Optional[dict] = None
    strengths: dict = field(default_factory=dict)
    forecast: Optional[dict] = None
    perturbation: Optional[dict] = None
    period_experiment: Optional[dict] = None
    strength_comparison: Optional[dict] = None
    prompt_hashes: list = field(default_factory=list)
    cache: dict = field(default_factory=dict)
    toolkit_version: str = __version__
    timestamps: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass
class RunOutput:
    experiment_id: str
    directory: Optional[Path]
    records: list
    summary: dict

    def to_dict(self) -> dict:
        return {"experiment_id": self.experiment_id, "toolkit_version": __version__,
                "records": [r.to_dict() for r in self.records], "summary": self.summary}


def _stage(name: str, fn: Callable):
    try:
        return fn()
    except PipelineError:
        raise
    except TsllmError as exc:
        raise PipelineError(name, exc) from exc


def load_series(spec: DatasetSpec) -> list[tuple[TimeSeries, dict, DatasetSpec]]:
    """Materialise the dataset source as ``(series, description, single spec)``."""
    if spec.sweep is not None:
        preset = single_period_sweep if spec.sweep["preset"] == "single_period" else multi_period_sweep
        cfgs = preset(seed=int(spec.sweep.get("seed", 0)), count=int(spec.sweep.get("count", 10)))
        out = []
        for i, c in enumerate(cfgs):
            single = DatasetSpec(synth=c.to_dict(), period=spec.period)
            out.extend((ts, dict(info, sweep_index=i), s) for ts, info, s in load_series(single))
        return out
    if spec.synth is not None:
        cfg = SynthConfig.from_dict(spec.synth)
        ts = generate(cfg, name="synthetic")
        info = {"source": "synth", "synth": cfg.to_dict()}
    elif spec.bundled is not None:
        ts, digest = load_bundled(spec.bundled)
        info = {"source": "bundled", "key": ts.name, "sha256": digest}
    else:
        ts = ingest_csv(spec.path, spec.value_column, spec.timestamp_column, spec.key)
        info = {"source": "csv", "path": spec.path, "sha256": file_sha256(spec.path)}
    if spec.period is not None:
        ts = TimeSeries(ts.values, ts.timestamps, spec.period, ts.name)
    info.update(name=ts.name, length=len(ts), period=ts.period)
    return [(ts, info, spec)]


def make_backend(fs: ForecasterSpec, ts: Optional[TimeSeries] = None,
                 cache: Optional[ResponseCache] = None) -> Backend:
    p = dict(fs.params)
    if fs.backend in BASELINE_IDS:
        return BaselineBackend(fs.backend, **p)
    if fs.backend == "echo_seasonal":
        return EchoSeasonal(p.get("period"))
    if fs.backend == "recency_weighted":
        return RecencyWeighted(p.get("half_life", 5.0))
    if fs.backend == "scripted":
        return Scripted(p.get("responses", []))
    if fs.backend == "echo_period":
        period = p.get("period")
        if period is None and ts is not None:
            period = ts.period or known_periods().get((ts.name or "").lower())
        if period is None:
            raise ConfigError("echo_period needs a period (param or dataset registry)")
        return EchoPeriod(period)
    if fs.backend == "chat":
        return ChatCompletionBackend(fs.endpoint, fs.model, api_key_env=fs.api_key_env,
                                     max_concurrency=fs.max_concurrency, cache=cache)
    raise ConfigError(f"unhandled backend {fs.backend!r}")


def _request_options(config: ExperimentConfig) -> dict:
    ps, fs = config.prompt, config.forecaster
    prompt = PromptOptions(ps.precision, ps.rescale, ps.percentile, 1.0, ps.knowledge_key,
                           ps.knowledge_as_system, ps.label, ps.fmt_decimals)
    seed = fs.sample_seed if fs.sample_seed is not None else config.seed
    sampling = Sampling(fs.num_samples, fs.temperature, seed, fs.short_policy)
    return {"mode": ps.mode, "prompt": prompt, "sampling": sampling}


def run_experiment(config: ExperimentConfig, series: Optional[TimeSeries] = None,
                   source: Optional[dict] = None, cache: Optional[ResponseCache] = None,
                   raw_dir: Optional[Path] = None, raw_name: str = "record-0") -> ResultRecord:
    """Run the configured pipeline on one series.

    ``series`` overrides the config's dataset (used when a sweep has been
    expanded). Module errors are re-raised as PipelineError naming the stage.
    """
    started = _now()
    if series is None:
        loaded = _stage("load", lambda: load_series(config.dataset))
        if len(loaded) != 1:
            raise ConfigError("run_experiment takes a single series; use run() for sweeps")
        series, source, _ = loaded[0]
    source = source or {"name": series.name, "length": len(series), "period": series.period}
    a = config.analysis
    train, test = _stage("split", lambda: train_test_split(series, config.split,
                                                           config.split_convention))
    record = ResultRecord(config.to_dict(), config.experiment_id(), source,
                          {"train": len(train), "test": len(test), "fraction": config.split,
                           "convention": config.split_convention})
    backend = _stage("backend", lambda: make_backend(config.forecaster, series, cache))
    before = cache.stats() if cache is not None else None

    period = None
    if a.strength or a.compare_strengths:
        period = _stage("period-resolution",
                        lambda: resolve_period(train, registry=known_periods()))
    if a.strength:
        record.strengths["input"] = _stage("strength", lambda: strength_report(train, period)).to_dict()
        if len(test) >= 2 * period:
            record.strengths["test"] = _stage("strength",
                                              lambda: strength_report(test.values, period)).to_dict()

    opts = _request_options(config)
    raw = {}
    if a.forecast:
        req = _stage("forecast", lambda: ForecastRequest(train, len(test), **opts))
        res = _stage("forecast", lambda: forecast(req, backend))
        record.forecast = {k: v for k, v in res.to_dict().items() if k != "raw_responses"}
        record.metrics = _stage("metrics", lambda: metrics(test.values, res.point)).to_dict()
        if res.prompt_hash:
            record.prompt_hashes.append(res.prompt_hash)
            bundle, _ = prepare_prompt(req)
            raw["forecast"] = {"prompt": bundle.to_dict(), "responses": res.raw_responses}
        if a.compare_strengths:
            cmp_ = _stage("compare-strengths",
                          lambda: output_strength_comparison(res.samples, test, period))
            record.strength_comparison = cmp_.to_dict()
            record.strengths["output"] = {"trend_strength": cmp_.median_trend,
                                          "seasonal_strength": cmp_.median_seasonal,
                                          "aggregate": "median"}
    if a.perturb:
        prof = _stage("perturb", lambda: counterfactual_sweep(
            series, backend, horizon=len(test), window_fraction=a.window_fraction,
            stride=a.stride, mu=a.mu, sigma=a.sigma, seed=config.seed, request_options=opts))
        record.perturbation = prof.to_dict()
    if a.period:
        if not isinstance(backend, TextBackend):
            raise PipelineError("period", ConfigError(f"{backend.id} cannot answer period prompts"))
        s = opts["sampling"]
        pe = _stage("period", lambda: period_experiment(
            series, backend, a.repeats, precision=config.prompt.precision,
            temperature=s.temperature, seed=s.seed))
        record.period_experiment = {k: v for k, v in pe.to_dict().items() if k != "raw"}
        raw["period"] = pe.raw

    if cache is not None:
        after = cache.stats()
        record.cache = {k: after[k] - before[k] for k in after}
    if raw_dir is not None and raw:
        raw_dir.mkdir(parents=True, exist_ok=True)
        (raw_dir / f"{raw_name}.json").write_text(
            json.dumps(raw, sort_keys=True, indent=2, ensure_ascii=False), encoding="utf-8")
    record.timestamps = {"started": started, "finished": _now()}
    return record


def summarize(records: list) -> dict:
    """Strength versus accuracy correlations across a multi-series run."""
    rows = []
    for r in records:
        m, s = r.metrics, r.strengths.get("input")
        if m and s and m.get("r2") is not None and m.get("mape") is not None:
            rows.append({"R2": m["r2"], "MAPE": m["mape"], "Q_T": s["trend_strength"],
                         "Q_S": s["seasonal_strength"]})
    out = {"n_records": len(records), "n_scored": len(rows)}
    if len(rows) >= 3:
        for a, b in (("R2", "Q_S"), ("R2", "Q_T"), ("MAPE", "Q_S"), ("MAPE", "Q_T")):
            try:
                out[f"pcc_{a}_{b}"] = correlation_matrix(rows, [a, b]).get(a, b)
            except ZeroVariance:
                out[f"pcc_{a}_{b}"] = None
    return out


def run(config: ExperimentConfig, write: bool = True) -> RunOutput:
    """Expand the dataset source, run every series and persist the results."""
    eid = config.experiment_id()
    directory = Path(config.out_dir) / eid if write else None
    cache = None
    if config.forecaster.backend == "chat":
        cache = ResponseCache(Path(config.cache_dir) if config.cache_dir
                              else Path(config.out_dir) / eid / "cache")
    loaded = _stage("load", lambda: load_series(config.dataset))
    records = []
    for i, (ts, info, single) in enumerate(loaded):
        cfg = config if len(loaded) == 1 else _with_dataset(config, single)
        raw_dir = directory / "raw" if directory is not None else None
        rec = run_experiment(cfg, ts, info, cache, raw_dir, f"record-{i}")
        rec.experiment_id = eid
        records.append(rec)
    out = RunOutput(eid, directory, records, summarize(records))
    if directory is not None:
        (directory / "raw").mkdir(parents=True, exist_ok=True)
        if not config.cache_dir:
            (directory / "cache").mkdir(exist_ok=True)
        (directory / "config.json").write_text(config.to_json() + "\n", encoding="utf-8")
        (directory / "record.json").write_text(
            json.dumps(out.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return out


def _with_dataset(config: ExperimentConfig, spec: DatasetSpec) -> ExperimentConfig:
    d = config.to_dict()
    d["dataset"] = spec.__dict__.copy()
    return ExperimentConfig.from_dict(d)
