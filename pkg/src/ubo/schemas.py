"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, field_validator

from .benchmarks import BENCHMARKS
from .engine import STRATEGIES
from .experiment import PLACEMENTS


class RunSettings(BaseModel):
    strategy: str = "ubo"
    benchmark: str = "beale"
    seed: int = 0
    epsilon: float = Field(default=0.05, gt=0)
    delta: float = Field(default=0.1, gt=0, lt=1)
    beta_scale: float = Field(default=0.2, gt=0)
    budget_multiplier: int = Field(default=10, ge=0)
    init_multiplier: int = Field(default=3, ge=1)
    kernel: str = "se"
    refit_every: int = Field(default=1, ge=1)
    placement: str = "random"

    @field_validator("strategy")
    @classmethod
    def _strategy_known(cls, v):
        if v not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}; got {v!r}")
        return v

    @field_validator("benchmark")
    @classmethod
    def _benchmark_known(cls, v):
        if v not in BENCHMARKS:
            raise ValueError(
                f"benchmark must be one of {sorted(BENCHMARKS)}; got {v!r}"
            )
        return v

    @field_validator("kernel")
    @classmethod
    def _kernel_known(cls, v):
        if v not in ("se", "matern52"):
            raise ValueError(f"kernel must be 'se' or 'matern52'; got {v!r}")
        return v

    @field_validator("placement")
    @classmethod
    def _placement_known(cls, v):
        if v not in PLACEMENTS:
            raise ValueError(f"placement must be one of {PLACEMENTS}; got {v!r}")
        return v


class RunResponse(BaseModel):
    settings: RunSettings
    dim: int
    columns: list[str]
    rows: list[list[Optional[float | int | str]]]
    recommendation_x: list[float]
    recommendation_y: float
    incomplete: bool


class CompareRequest(BaseModel):
    settings: RunSettings = RunSettings()
    strategies: list[str] = Field(default=["ubo"], min_length=1)
    seeds: list[int] = Field(default=[0], min_length=1)
    jobs: int = Field(default=1, ge=1)

    @field_validator("strategies")
    @classmethod
    def _strategies_known(cls, v):
        for s in v:
            if s not in STRATEGIES:
                raise ValueError(f"strategy must be one of {STRATEGIES}; got {s!r}")
        return v


class CompareRow(BaseModel):
    benchmark: str
    strategy: str
    iteration: int
    mean_best: float
    stderr: float


class CompareResponse(BaseModel):
    rows: list[CompareRow]


class BenchmarkInfo(BaseModel):
    name: str
    dim: int
    domain_lower: list[float]
    domain_upper: list[float]
    max_value: float
