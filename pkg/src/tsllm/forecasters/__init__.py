"""Forecasting backends behind one ``forecast`` call."""

from .base import (Backend, ForecastRequest, ForecastResult, NumericBackend, PromptOptions,
                   Sampling, TextBackend, fit_to_horizon, forecast, median_point, prepare_prompt)
from .baselines import (BASELINE_IDS, BaselineBackend, exponential_smoothing, fit_holt_winters,
                        moving_average, naive_drift, naive_mean, naive_seasonal)
from .llm import ChatCompletionBackend
from .mocks import EchoPeriod, EchoSeasonal, FunctionBackend, RecencyWeighted, Scripted

__all__ = [
    "Backend", "ForecastRequest", "ForecastResult", "NumericBackend", "PromptOptions", "Sampling",
    "TextBackend", "fit_to_horizon", "forecast", "median_point", "prepare_prompt",
    "BASELINE_IDS", "BaselineBackend", "exponential_smoothing", "fit_holt_winters",
    "moving_average", "naive_drift", "naive_mean", "naive_seasonal", "ChatCompletionBackend",
    "EchoPeriod", "EchoSeasonal", "FunctionBackend", "RecencyWeighted", "Scripted",
]
