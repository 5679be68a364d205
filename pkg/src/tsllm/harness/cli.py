"""Command line front end: ``tsllm <subcommand> ...``.

Series inputs come from ``--input FILE.csv`` (with ``--column``), a bundled
dataset via ``--dataset KEY``, or inline ``--values 1,2,3``. Results are
printed as JSON unless the subcommand naturally produces text or CSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import replace
from typing import Optional, Sequence

from .. import __version__
from ..analysis.metrics import correlation_matrix, metrics
from ..analysis.period import period_experiment
from ..analysis.perturb import counterfactual_sweep
from ..analysis.strengths import output_strength_comparison
from ..cache import ResponseCache
from ..codec import decode_digits, encode_digits, paraphrase, rescale_for_tokens, reverse_paraphrase
from ..errors import ConfigError, TsllmError
from ..forecasters.base import ForecastRequest, PromptOptions, Sampling, forecast
from ..periodogram import estimate_period_periodogram, resolve_period
from ..prompts import known_periods
from ..series import TimeSeries
from ..stl import stl_decompose, strength_report
from ..synth import SynthConfig, generate, multi_period_sweep, single_period_sweep
from .config import BACKEND_IDS, ExperimentConfig, ForecasterSpec
from .ingest import ingest_csv, load_bundled
from .runner import make_backend, run

log = logging.getLogger("tsllm")


def _emit(obj, out: Optional[str] = None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


@contextmanager
def _csv_out(path: Optional[str]):
    if not path:
        yield csv.writer(sys.stdout)
        return
    with open(path, "w", newline="", encoding="utf-8") as f:
        yield csv.writer(f)


def _values_arg(s: str) -> list[float]:
    try:
        return [float(v) for v in s.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {s!r}") from None


def _series(args) -> TimeSeries:
    given = [x for x in (args.input, args.dataset, args.values) if x is not None]
    if len(given) != 1:
        raise ConfigError("give exactly one of --input, --dataset or --values")
    if args.input:
        ts = ingest_csv(args.input, args.column, args.time_column)
    elif args.dataset:
        ts = load_bundled(args.dataset)[0]
    else:
        ts = TimeSeries(args.values)
    if getattr(args, "period", None) is not None:
        ts = TimeSeries(ts.values, ts.timestamps, args.period, ts.name)
    return ts


def _text_arg(args) -> str:
    return args.text if args.text is not None else sys.stdin.read()


def _params(pairs: Sequence[str]) -> dict:
    out = {}
    for pair in pairs or ():
        k, sep, v = pair.partition("=")
        if not sep:
            raise ConfigError(f"--param expects key=value, got {pair!r}")
        try:
            out[k] = json.loads(v)
        except ValueError:
            out[k] = v
    return out


def _backend(args, ts: TimeSeries):
    fs = ForecasterSpec(backend=args.backend, params=_params(args.param), model=args.model,
                        endpoint=args.endpoint, api_key_env=args.api_key_env)
    cache = ResponseCache(args.cache_dir) if args.cache_dir and args.backend == "chat" else None
    return make_backend(fs, ts, cache)


def _request_options(args) -> dict:
    prompt = PromptOptions(precision=args.precision, rescale=not args.no_rescale,
                           percentile=args.percentile, knowledge_key=args.knowledge,
                           knowledge_as_system=args.knowledge_as_system, label=args.label,
                           fmt_decimals=args.decimals)
    return {"mode": args.mode, "prompt": prompt,
            "sampling": Sampling(args.samples, args.temperature, args.seed)}


# -- subcommands ---------------------------------------------------------------

def cmd_synth(args):
    if args.preset:
        fn = single_period_sweep if args.preset == "single_period" else multi_period_sweep
        configs = fn(seed=args.seed, count=args.count)
    else:
        betas = []
        for b in args.beta or ():
            amp, _, freq = b.partition(":")
            betas.append((float(amp), float(freq or 1.0)))
        configs = [SynthConfig(args.alpha, tuple(betas), args.x_min, args.x_max, args.n_points,
                               args.noise_sd, args.seed)]
    series = [generate(c) for c in configs]
    with _csv_out(args.output) as w:
        w.writerow(["x"] + [f"y{i}" for i in range(len(series))])
        for j in range(len(series[0])):
            w.writerow([repr(float(series[0].timestamps[j]))]
                       + [repr(float(s.values[j])) for s in series])
    if args.configs:
        _emit([c.to_dict() for c in configs], args.configs)


def cmd_decompose(args):
    ts = _series(args)
    dec = stl_decompose(ts, args.period)
    with _csv_out(args.output) as w:
        w.writerow(["observed", "trend", "seasonal", "residual"])
        for row in zip(ts.values, dec.trend, dec.seasonal, dec.residual):
            w.writerow([repr(float(v)) for v in row])


def cmd_strength(args):
    ts = _series(args)
    p = resolve_period(ts, args.period, known_periods())
    _emit(strength_report(ts, p).to_dict(), args.output)


def cmd_encode(args):
    ts = _series(args)
    if args.no_rescale:
        enc = encode_digits(ts.values, args.precision)
    else:
        scaled, scale = rescale_for_tokens(ts.values, args.percentile)
        enc = encode_digits(scaled, args.precision, scale=scale)
    if args.json:
        _emit({"text": enc.text, "precision": enc.precision,
               "scale": None if enc.scale is None else enc.scale.to_dict()}, args.output)
    else:
        _emit(enc.text, args.output)


def cmd_decode(args):
    v = decode_digits(_text_arg(args), args.precision)
    if args.divisor is not None:
        v = v * args.divisor
    _emit(", ".join(repr(float(x)) for x in v), args.output)


def cmd_paraphrase(args):
    ts = _series(args)
    _emit(paraphrase(ts.values, args.label, args.decimals).text, args.output)


def cmd_reverse(args):
    _emit(", ".join(repr(float(x)) for x in reverse_paraphrase(_text_arg(args))), args.output)


def cmd_forecast(args):
    ts = _series(args)
    res = forecast(ForecastRequest(ts, args.horizon, **_request_options(args)), _backend(args, ts))
    _emit(res.to_dict(), args.output)


def cmd_perturb(args):
    ts = _series(args)
    prof = counterfactual_sweep(ts, _backend(args, ts), horizon=args.horizon,
                                window_fraction=args.window_fraction, stride=args.stride,
                                mu=args.mu, sigma=args.sigma, seed=args.seed,
                                request_options=_request_options(args))
    _emit(prof.to_dict(), args.output)


def cmd_detect_period(args):
    ts = _series(args)
    if args.backend is None:
        ranked = estimate_period_periodogram(ts)
        _emit({"period": ranked[0][0], "candidates": ranked[: args.top]}, args.output)
        return
    pe = period_experiment(ts, _backend(args, ts), args.repeats, precision=args.precision,
                           temperature=args.temperature, seed=args.seed)
    _emit(pe.to_dict(), args.output)


def cmd_evaluate(args):
    if args.records:
        with open(args.records, encoding="utf-8") as f:
            rows = json.load(f)
        _emit(correlation_matrix(rows, args.columns).to_dict(), args.output)
        return
    if args.actual is None or args.predicted is None:
        raise ConfigError("evaluate needs --actual and --predicted, or --records")
    _emit(metrics(args.actual, args.predicted).to_dict(), args.output)


def cmd_compare_strengths(args):
    with open(args.samples, encoding="utf-8") as f:
        samples = json.load(f)
    if isinstance(samples, dict):
        samples = samples["samples"]
    ts = _series(args)
    if args.period is None and ts.period is None:
        raise ConfigError("compare-strengths needs --period")
    _emit(output_strength_comparison(samples, ts, args.period or ts.period).to_dict(), args.output)


def cmd_run(args):
    if not args.config:
        raise ConfigError("run needs --config <file.json>")
    cfg = ExperimentConfig.load(args.config)
    overrides = {}
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.cache_dir is not None:
        overrides["cache_dir"] = args.cache_dir
    if args.seed_given:
        overrides["seed"] = args.seed
    if overrides:
        cfg = replace(cfg, **overrides)
    out = run(cfg)
    _emit({"experiment_id": out.experiment_id, "directory": str(out.directory),
           "records": len(out.records), "summary": out.summary})


# -- parser --------------------------------------------------------------------

def _add_series(p, period=True):
    p.add_argument("--input", help="CSV file")
    p.add_argument("--column", help="value column in the CSV")
    p.add_argument("--time-column", help="timestamp column in the CSV")
    p.add_argument("--dataset", help="bundled dataset key")
    p.add_argument("--values", type=_values_arg, help="inline comma-separated values")
    if period:
        p.add_argument("--period", type=int)


def _add_prompt(p):
    p.add_argument("--mode", choices=("digits", "paraphrase"), default="digits")
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--percentile", type=float, default=95.0)
    p.add_argument("--no-rescale", action="store_true")
    p.add_argument("--knowledge", help="dataset key whose description prefixes the prompt")
    p.add_argument("--knowledge-as-system", action="store_true")
    p.add_argument("--label", default="value")
    p.add_argument("--decimals", type=int, default=2)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--temperature", type=float, default=0.7)


def _add_backend(p, required=True):
    p.add_argument("--backend", choices=BACKEND_IDS, required=required,
                   default=None if not required else argparse.SUPPRESS)
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="backend parameter; VALUE is parsed as JSON when possible")
    p.add_argument("--model")
    p.add_argument("--endpoint")
    p.add_argument("--api-key-env", default="TSLLM_API_KEY")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory for runs")
    common.add_argument("--cache-dir", default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS, help="experiment config JSON")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="write result here")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="tsllm", parents=[common],
                                     description="Time series forecasting with language models.")
    parser.add_argument("--version", action="version", version=f"tsllm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("synth", cmd_synth, "generate synthetic trend-plus-cosine series (CSV)")
    p.add_argument("--preset", choices=("single_period", "multi_period"))
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", action="append", metavar="AMP:FREQ")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=20.0)
    p.add_argument("--n-points", type=int, default=200)
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--configs", help="also write the generating configs as JSON here")

    _add_series(add("decompose", cmd_decompose, "STL components as CSV"))
    _add_series(add("strength", cmd_strength, "trend and seasonal strength"))

    p = add("encode", cmd_encode, "digit-encode a series")
    _add_series(p, period=False)
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--percentile", type=float, default=95.0)
    p.add_argument("--no-rescale", action="store_true")
    p.add_argument("--json", action="store_true", help="also print the scale")

    p = add("decode", cmd_decode, "decode a digit string")
    p.add_argument("text", nargs="?", help="encoded text (default: stdin)")
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--divisor", type=float, help="multiply decoded values by this")

    p = add("paraphrase", cmd_paraphrase, "describe a series in words")
    _add_series(p, period=False)
    p.add_argument("--label", default="value")
    p.add_argument("--decimals", type=int, default=2)

    p = add("reverse", cmd_reverse, "read values back from a paraphrase")
    p.add_argument("text", nargs="?", help="paraphrase text (default: stdin)")

    p = add("forecast", cmd_forecast, "forecast with one backend")
    _add_series(p)
    _add_backend(p)
    _add_prompt(p)
    p.add_argument("--horizon", type=int, required=True)

    p = add("perturb", cmd_perturb, "counterfactual sliding-window sweep")
    _add_series(p)
    _add_backend(p)
    _add_prompt(p)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--window-fraction", type=float, default=0.1)
    p.add_argument("--stride", type=int)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.2)

    p = add("detect-period", cmd_detect_period, "periodogram or model-based period detection")
    _add_series(p, period=False)
    _add_backend(p, required=False)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--temperature", type=float, default=0.7)
    p.add_argument("--top", type=int, default=5)

    p = add("evaluate", cmd_evaluate, "error metrics, or a correlation matrix of records")
    p.add_argument("--actual", type=_values_arg)
    p.add_argument("--predicted", type=_values_arg)
    p.add_argument("--records", help="JSON list of objects with numeric columns")
    p.add_argument("--columns", nargs="+")

    p = add("compare-strengths", cmd_compare_strengths, "output versus test strengths")
    _add_series(p)
    p.add_argument("--samples", required=True, help="JSON list of forecast samples")

    add("run", cmd_run, "run a full experiment config")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed_given = hasattr(args, "seed")
    for name, default in (("seed", 0), ("out", None), ("cache_dir", None), ("config", None),
                          ("output", None), ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except TsllmError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
