"""Mapping from flat run settings (benchmark name, strategy, seed, protocol
knobs) to engine runs, plus the strategies-by-seeds comparison matrix with
optional process-level parallelism.

Budgets follow the synthetic-function protocol: ``budget_multiplier * d``
evaluations after ``init_multiplier * d`` Latin-hypercube initial points.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from . import benchmarks
from .engine import STRATEGIES, RunConfig, RunTrace, run

DEFAULT_SETTINGS = {
    "strategy": "ubo",
    "benchmark": "beale",
    "seed": 0,
    "epsilon": 0.05,
    "delta": 0.1,
    "beta_scale": 0.2,
    "budget_multiplier": 10,
    "init_multiplier": 3,
    "kernel": "se",
    "refit_every": 1,
    "placement": "random",
}

PLACEMENTS = ("random", "exclude-argmax", "include-argmax")


def normalize_settings(settings: dict) -> dict:
    """Fill defaults and validate the flat settings dict."""
    unknown = set(settings) - set(DEFAULT_SETTINGS)
    if unknown:
        raise ValueError(f"unknown settings field(s): {sorted(unknown)}")
    merged = {**DEFAULT_SETTINGS, **settings}
    if merged["strategy"] not in STRATEGIES:
        raise ValueError(
            f"strategy must be one of {STRATEGIES}; got {merged['strategy']!r}"
        )
    if merged["benchmark"] not in benchmarks.BENCHMARKS:
        raise ValueError(
            f"benchmark must be one of {sorted(benchmarks.BENCHMARKS)}; "
            f"got {merged['benchmark']!r}"
        )
    if merged["epsilon"] <= 0:
        raise ValueError(f"epsilon must be > 0; got {merged['epsilon']}")
    if not 0 < merged["delta"] < 1:
        raise ValueError(f"delta must be in (0, 1); got {merged['delta']}")
    if merged["placement"] not in PLACEMENTS:
        raise ValueError(
            f"placement must be one of {PLACEMENTS}; got {merged['placement']!r}"
        )
    return merged


def build_run_config(settings: dict) -> RunConfig:
    settings = normalize_settings(settings)
    bench = benchmarks.get(settings["benchmark"])
    lower, upper = benchmarks.place_initial_box(
        bench,
        settings["seed"],
        placement=settings["placement"],
    )
    return RunConfig(
        strategy=settings["strategy"],
        objective=bench.evaluate,
        box_lower=lower,
        box_upper=upper,
        budget=settings["budget_multiplier"] * bench.dim,
        init_count=settings["init_multiplier"] * bench.dim,
        seed=settings["seed"],
        epsilon=settings["epsilon"],
        delta=settings["delta"],
        beta_scale=settings["beta_scale"],
        kernel_family=settings["kernel"],
        refit_every=settings["refit_every"],
    )


def run_single(settings: dict) -> tuple[dict, RunTrace]:
    """Run one (strategy, benchmark, seed) experiment."""
    settings = normalize_settings(settings)
    return settings, run(build_run_config(settings))


def _best_curve_job(settings: dict):
    settings, trace = run_single(settings)
    return settings, trace.best_curve


def run_matrix(
    base_settings: dict,
    strategies: list[str],
    seeds: list[int],
    jobs: int = 1,
) -> list[dict]:
    """Cross product of strategies x seeds; aggregated best-value curves.

    Returns long-format rows: benchmark, strategy, iteration, mean_best,
    stderr.  Iteration 0..init-1 covers the initialization points.
    """
    if not strategies or not seeds:
        raise ValueError("at least one strategy and one seed are required")
    job_settings = [
        {**base_settings, "strategy": s, "seed": int(seed)}
        for s in strategies
        for seed in seeds
    ]
    for js in job_settings:
        normalize_settings(js)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_best_curve_job, job_settings))
    else:
        results = [_best_curve_job(js) for js in job_settings]

    rows = []
    for strategy in strategies:
        curves = [c for s, c in results if s["strategy"] == strategy]
        mean, stderr = benchmarks.aggregate(curves)
        bench = base_settings.get("benchmark", DEFAULT_SETTINGS["benchmark"])
        for i, (m, se) in enumerate(zip(mean, stderr)):
            rows.append(
                {
                    "benchmark": bench,
                    "strategy": strategy,
                    "iteration": i,
                    "mean_best": float(m),
                    "stderr": float(se),
                }
            )
    return rows
