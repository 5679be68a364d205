"""Experiment configuration, ingestion, caching, runs and the CLI."""

from ..cache import ResponseCache
from .config import (AnalysisSpec, DatasetSpec, ExperimentConfig, ForecasterSpec, PromptSpec,
                     BACKEND_IDS)
from .ingest import bundled_datasets, file_sha256, ingest_csv, load_bundled
from .runner import ResultRecord, RunOutput, load_series, make_backend, run, run_experiment

__all__ = [
    "ResponseCache", "AnalysisSpec", "DatasetSpec", "ExperimentConfig", "ForecasterSpec",
    "PromptSpec", "BACKEND_IDS", "bundled_datasets", "file_sha256", "ingest_csv", "load_bundled",
    "ResultRecord", "RunOutput", "load_series", "make_backend", "run", "run_experiment",
]
