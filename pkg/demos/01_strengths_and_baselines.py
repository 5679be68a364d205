"""
Trend and seasonal strength, and the classical baselines
========================================================

Decompose the monthly airline passenger series, measure how much of it is
trend and how much is seasonality, then see how far simple forecasters get
on the last fifth of the data.
"""

# %%
# Load the bundled series. The dataset registry knows its period.
import numpy as np

from tsllm.analysis import metrics
from tsllm.forecasters import exponential_smoothing, naive_drift, naive_mean, naive_seasonal
from tsllm.harness import load_bundled
from tsllm.periodogram import estimate_period_periodogram
from tsllm.series import train_test_split
from tsllm.stl import stl_decompose, strength_report

air, digest = load_bundled("AirPassengersDataset")
print(len(air), "points, period", air.period, "sha256", digest[:12])

# %%
# The periodogram should agree with the calendar.
print("periodogram candidates:", estimate_period_periodogram(air)[:3])

# %%
# STL splits the series into trend + seasonal + residual, exactly.
dec = stl_decompose(air)
print("max reconstruction error:", np.max(np.abs(dec.observed - air.values)))

# %%
# Strengths close to 1 mean the residual is small next to the component.
rep = strength_report(air)
print(f"Q_T = {rep.trend_strength:.3f}, Q_S = {rep.seasonal_strength:.3f}")

# %%
# Baselines on an 80/20 split. "index" puts the cut where darts' split_before does.
train, test = train_test_split(air, 0.8, "index")
for name, pred in [
    ("naive mean", naive_mean(train, len(test)).point),
    ("naive seasonal", naive_seasonal(train, len(test)).point),
    ("naive drift", naive_drift(train, len(test)).point),
    ("holt-winters", exponential_smoothing(train, len(test), seasonal=12, trend=True).point),
]:
    m = metrics(test.values, pred)
    print(f"{name:>15}: MAPE {m.mape:6.2f}  MSE {m.mse:9.2f}  R2 {m.r2:6.3f}")
