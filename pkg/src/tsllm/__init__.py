"""Tools for studying how language models forecast time series.

The package covers series handling, STL decomposition and strength
measures, synthetic data, text codecs for numeric series, prompt
construction, forecasting backends, analysis procedures and an experiment
harness with a command line front end.
"""

__version__ = "0.1.0"

from .codec import (EncodedSeries, Paraphrase, decode_digits, encode_digits, paraphrase,
                    rescale_for_tokens, reverse_paraphrase)
from .periodogram import estimate_period_periodogram, resolve_period
from .prompts import (KnowledgeRegistry, PromptBundle, build_forecast_prompt,
                      build_knowledge_prompt, build_paraphrase_prompt, build_period_prompt,
                      default_registry)
from .series import (ScaleParams, TimeSeries, denormalize, minmax_normalize, train_test_split,
                     validate_series)
from .stl import (Decomposition, STLConfig, StrengthReport, seasonal_strength, stl_decompose,
                  strength_report, trend_strength)
from .synth import SynthConfig, generate, multi_period_sweep, sample_sweep, single_period_sweep
