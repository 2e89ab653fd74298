"""Bayesian optimization that automatically expands an unknown search space.

Core pieces: GP regression (`gp`), confidence-bound acquisitions
(`acquisition`), the closed-form expansion radius and trigger (`expansion`),
the inner acquisition maximizer (`acq_opt`), the outer loop and baselines
(`engine`), benchmark objectives (`benchmarks`), and an HTTP service with a
CLI client (`service`, `cli`).
"""

from .engine import RunConfig, RunTrace, run
from .gp import Dataset, GpPosterior, NumericError, fit_hyperparameters
from .kernels import KernelSpec

__all__ = [
    "Dataset",
    "GpPosterior",
    "KernelSpec",
    "NumericError",
    "RunConfig",
    "RunTrace",
    "fit_hyperparameters",
    "run",
]

__version__ = "0.1.0"
