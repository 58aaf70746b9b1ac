"""
Constants module for cloudrain.

Provides the bundled experiment presets and the reference sweep results
used by the regression checks.
"""

from .presets import experiment_presets, get_preset
from .reference import (
    brownian_fit_summaries,
    brownian_sweep_dt,
    brownian_sweep_table,
    lambda_fit_summaries,
    vortex_fit_summaries,
)

__all__ = [
    "experiment_presets",
    "get_preset",
    "brownian_fit_summaries",
    "brownian_sweep_dt",
    "brownian_sweep_table",
    "lambda_fit_summaries",
    "vortex_fit_summaries",
]
