"""Metrics, correlations, counterfactual sweeps and period experiments."""

from .metrics import (MAPE_EPSILON, CorrelationMatrix, MetricSet, correlation_matrix, metrics,
                      pearson, strength_metric_row)
from .period import PeriodExperiment, first_integer, period_experiment, standard_median
from .perturb import PerturbationProfile, counterfactual_sweep, perturb_window
from .strengths import StrengthComparison, output_strength_comparison

__all__ = [
    "MAPE_EPSILON", "CorrelationMatrix", "MetricSet", "correlation_matrix", "metrics", "pearson",
    "strength_metric_row", "PeriodExperiment", "first_integer", "period_experiment",
    "standard_median", "PerturbationProfile", "counterfactual_sweep", "perturb_window",
    "StrengthComparison", "output_strength_comparison",
]
