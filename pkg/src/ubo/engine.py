"""The outer optimization loop: the expanding-search-space strategy and the
fixed-box / volume-doubling baselines, all producing the same per-iteration
trace schema.

Outputs are standardized (mean 0, variance 1) before GP fitting; epsilon
and the trigger bound live on that standardized scale, while reported
objective values are raw.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import acquisition, expansion, gp
from .acq_opt import maximize_over_box, refined_maximize
from .acquisition import BetaSchedule, lcb_batch, ucb_grad
from .benchmarks import latin_hypercube
from .kernels import KernelSpec

STRATEGIES = ("ubo", "vanilla-fixed-box", "volume-doubling")


@dataclass
class RunConfig:
    strategy: str
    objective: Callable[[np.ndarray], float]
    box_lower: np.ndarray
    box_upper: np.ndarray
    budget: int
    init_count: int
    seed: int = 0
    epsilon: float = 0.05
    delta: float = 0.1
    beta_scale: float = 0.2
    kernel_family: str = "se"
    refit_every: int = 1
    a_k: float = 1.0
    b_k: float = 1.0
    fixed_noise: float | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.init_count < 2:
            raise ValueError("init count must be >= 2")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.refit_every < 1:
            raise ValueError("refit_every must be >= 1")
        self.box_lower = np.asarray(self.box_lower, dtype=float).ravel()
        self.box_upper = np.asarray(self.box_upper, dtype=float).ravel()
        if self.box_lower.size != self.box_upper.size or np.any(
            self.box_upper <= self.box_lower
        ):
            raise ValueError("initial box must be non-degenerate")

    @property
    def dim(self) -> int:
        return self.box_lower.size


@dataclass
class IterationRecord:
    t: int
    t_local: int | None
    k: int
    beta: float | None
    x: np.ndarray
    y: float
    best_y: float
    r_b: float | None
    expanded: bool
    d_eps: float | None
    lo: np.ndarray
    hi: np.ndarray
    lambda_max: float | None
    m_bound: float | None
    flags: list = field(default_factory=list)


@dataclass
class RunTrace:
    records: list
    recommendation_x: np.ndarray
    recommendation_y: float
    incomplete: bool = False

    @property
    def best_curve(self) -> np.ndarray:
        return np.array([r.best_y for r in self.records])

    @property
    def final_box(self):
        return self.records[-1].lo, self.records[-1].hi


def _standardize(values):
    y = np.asarray(values, dtype=float)
    mean = float(y.mean())
    scale = float(y.std())
    if scale < 1e-12:
        scale = 1.0
    return (y - mean) / scale, mean, scale


def run(config: RunConfig) -> RunTrace:
    if config.strategy == "ubo":
        return run_ubo(config)
    return run_baseline(config)


def _init_observations(config: RunConfig):
    ss = np.random.SeedSequence(config.seed)
    lhs_seed, fit_seed, acq_seed = (int(s.generate_state(1)[0]) for s in ss.spawn(3))
    X = latin_hypercube(config.box_lower, config.box_upper, config.init_count, lhs_seed)
    y = []
    for x in X:
        y.append(float(config.objective(x)))
    records = []
    best = -np.inf
    for x, yv in zip(X, y):
        best = max(best, yv)
        records.append(
            IterationRecord(
                t=0, t_local=None, k=0, beta=None, x=x.copy(), y=yv, best_y=best,
                r_b=None, expanded=False, d_eps=None,
                lo=config.box_lower.copy(), hi=config.box_upper.copy(),
                lambda_max=None, m_bound=None,
            )
        )
    return list(X), y, records, fit_seed, acq_seed


def _fit_or_reuse(config, X, y_std, box_diameter, fit_seed, t, state):
    """Refit hyperparameters on the configured cadence; reuse otherwise."""
    flags = []
    if state.get("kernel") is None or (t - 1) % config.refit_every == 0:
        data = gp.Dataset(np.array(X), y_std, state.get("noise", 1e-4))
        kernel, noise, fitted = gp.fit_hyperparameters(
            data,
            family=config.kernel_family,
            domain_diameter=box_diameter,
            seed=fit_seed,
            fixed_noise=config.fixed_noise,
        )
        state["kernel"], state["noise"] = kernel, noise
        if not fitted:
            flags.append("default_kernel")
    return state["kernel"], state["noise"], flags


def run_ubo(config: RunConfig) -> RunTrace:
    X, y, records, fit_seed, acq_seed = _init_observations(config)
    rng = np.random.default_rng(acq_seed)
    region = expansion.from_box(config.box_lower, config.box_upper)
    trigger = expansion.TriggerState(epsilon=config.epsilon)
    k = 0
    state: dict = {}
    incomplete = False

    for t in range(1, config.budget + 1):
        t_local = trigger.t_local(t)
        y_std, y_mean, y_scale = _standardize(y)
        diameter = float(np.linalg.norm(region.upper - region.lower))
        kernel, noise, flags = _fit_or_reuse(
            config, X, y_std, diameter, fit_seed, t, state
        )
        post = gp.GpPosterior(gp.Dataset(np.array(X), y_std, noise), kernel)

        schedule = BetaSchedule(
            delta=config.delta, dim=config.dim, r_k=region.longest_side,
            a_k=config.a_k, b_k=config.b_k, scale=config.beta_scale,
        )
        beta_t = acquisition.beta(schedule, t_local)

        best_idx = int(np.argmax(y))
        iter_seed = int(rng.integers(0, 2**31 - 1))
        x_t, ucb_t = refined_maximize(
            post, beta_t, config.epsilon, region, seed=iter_seed,
            extra_start=region.clip(X[best_idx]),
        )
        try:
            y_t = float(config.objective(x_t))
        except Exception:
            incomplete = True
            break
        X.append(x_t)
        y.append(y_t)

        best_lcb = float(np.max(lcb_batch(post, np.array(X), beta_t)))
        r_b = expansion.regret_upper_bound(ucb_t, best_lcb, t_local)

        expanded = trigger.should_expand(r_b, t)
        d_eps = lam = m_bound = None
        if expanded:
            lam = post.lambda_max
            m_bound = post.weight_bound
            eps_eff = config.epsilon
            cap = 3.99 * np.sqrt(beta_t) * kernel.theta
            if eps_eff >= cap:
                eps_eff = cap
                flags.append("epsilon_clamped")
            d_eps = expansion.expansion_radius(
                lam, m_bound, post.n, kernel, beta_t, eps_eff
            )
            k += 1
            region = expansion.build_region(np.array(X), d_eps, k)
            trigger.record_expansion(t)
        elif k >= 1:
            # The balls stay centered on the current observations, so the
            # hypercube tracks new data between expansions; only the radius
            # is frozen until the next trigger.
            region = expansion.build_region(np.array(X), region.radius, k)

        records.append(
            IterationRecord(
                t=t, t_local=t_local, k=k, beta=beta_t, x=np.asarray(x_t),
                y=y_t, best_y=float(np.max(y)), r_b=r_b, expanded=expanded,
                d_eps=d_eps, lo=region.lower.copy(), hi=region.upper.copy(),
                lambda_max=lam, m_bound=m_bound, flags=flags,
            )
        )

    best_idx = int(np.argmax(y))
    return RunTrace(
        records=records,
        recommendation_x=np.asarray(X[best_idx]),
        recommendation_y=float(y[best_idx]),
        incomplete=incomplete,
    )


def run_baseline(config: RunConfig) -> RunTrace:
    X, y, records, fit_seed, acq_seed = _init_observations(config)
    rng = np.random.default_rng(acq_seed)
    lo = config.box_lower.copy()
    hi = config.box_upper.copy()
    doubling = config.strategy == "volume-doubling"
    period = 3 * config.dim
    state: dict = {}
    incomplete = False

    for t in range(1, config.budget + 1):
        y_std, y_mean, y_scale = _standardize(y)
        diameter = float(np.linalg.norm(hi - lo))
        kernel, noise, flags = _fit_or_reuse(config, X, y_std, diameter, fit_seed, t, state)
        post = gp.GpPosterior(gp.Dataset(np.array(X), y_std, noise), kernel)

        schedule = BetaSchedule(
            delta=config.delta, dim=config.dim, r_k=float(np.max(hi - lo)),
            a_k=config.a_k, b_k=config.b_k, scale=config.beta_scale,
        )
        beta_t = acquisition.beta(schedule, t)

        best_idx = int(np.argmax(y))
        iter_seed = int(rng.integers(0, 2**31 - 1))
        x_t, _ = maximize_over_box(
            lambda x: acquisition.ucb(post, x, beta_t),
            lo, hi, seed=iter_seed,
            extra_start=np.clip(X[best_idx], lo, hi),
            jac=lambda x: ucb_grad(post, x, beta_t),
        )
        try:
            y_t = float(config.objective(x_t))
        except Exception:
            incomplete = True
            break
        X.append(x_t)
        y.append(y_t)

        expanded = False
        if doubling and t % period == 0:
            center = 0.5 * (lo + hi)
            half = 0.5 * (hi - lo) * 2.0 ** (1.0 / config.dim)
            lo, hi = center - half, center + half
            expanded = True

        records.append(
            IterationRecord(
                t=t, t_local=t, k=0, beta=beta_t, x=np.asarray(x_t), y=y_t,
                best_y=float(np.max(y)), r_b=None, expanded=expanded,
                d_eps=None, lo=lo.copy(), hi=hi.copy(),
                lambda_max=None, m_bound=None, flags=flags,
            )
        )

    best_idx = int(np.argmax(y))
    return RunTrace(
        records=records,
        recommendation_x=np.asarray(X[best_idx]),
        recommendation_y=float(y[best_idx]),
        incomplete=incomplete,
    )
