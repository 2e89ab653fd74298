"""Confidence-bound acquisition functions and the per-space beta schedule.

``beta`` implements the epoch-local exploration weight: it depends on the
iteration count inside the current search space (t_local) and on the side
length of that space, and resets whenever the space is expanded.  A scale
factor of 1 gives the theoretical schedule; 1/5 is the experiment-mode
deflation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BETA_FLOOR = 1e-6


@dataclass(frozen=True)
class BetaSchedule:
    """Parameters of the exploration-weight schedule for one search space."""

    delta: float
    dim: int
    r_k: float
    a_k: float = 1.0
    b_k: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must be in (0, 1)")
        if self.r_k <= 0:
            raise ValueError("r_k must be > 0")
        if self.a_k <= 0 or self.b_k <= 0:
            raise ValueError("a_k and b_k must be > 0")
        if self.scale <= 0:
            raise ValueError("scale must be > 0")


def beta(schedule: BetaSchedule, t_local: int) -> float:
    """Exploration weight for iteration ``t_local`` within the current space.

    Floored at a small positive value: for very small spaces the second
    term can be negative, and downstream math requires beta > 0.
    """
    if t_local < 1:
        raise ValueError("t_local must be >= 1")
    t2 = float(t_local) ** 2
    d = schedule.dim
    term1 = 2.0 * np.log(t2 * 2.0 * np.pi**2 / (3.0 * schedule.delta))
    inner = t2 * d * schedule.b_k * schedule.r_k * np.sqrt(
        np.log(4.0 * d * schedule.a_k / schedule.delta)
    )
    term2 = 2.0 * d * np.log(inner)
    return max(schedule.scale * (term1 + term2), BETA_FLOOR)


def ucb(post, x, beta_t: float) -> float:
    """Upper confidence bound mu + sqrt(beta) * sigma at a single point."""
    if beta_t < 0:
        raise ValueError("beta must be >= 0")
    mean, var = post.mean_var_point(x)
    return mean + np.sqrt(beta_t) * np.sqrt(var)


def lcb(post, x, beta_t: float) -> float:
    """Lower confidence bound mu - sqrt(beta) * sigma at a single point."""
    if beta_t < 0:
        raise ValueError("beta must be >= 0")
    mean, var = post.mean_var_point(x)
    return mean - np.sqrt(beta_t) * np.sqrt(var)


def ucb_batch(post, X, beta_t: float) -> np.ndarray:
    """Upper confidence bound at every row of X."""
    mean, var = post.mean_var(X)
    return mean + np.sqrt(beta_t) * np.sqrt(var)


def lcb_batch(post, X, beta_t: float) -> np.ndarray:
    """Lower confidence bound at every row of X."""
    mean, var = post.mean_var(X)
    return mean - np.sqrt(beta_t) * np.sqrt(var)


def ucb_grad(post, x, beta_t: float):
    """UCB value and gradient at x; used by the inner optimizer."""
    mean, var, dmean, dvar = post.mean_var_grad(x)
    sd = np.sqrt(var)
    sb = np.sqrt(beta_t)
    if sd < 1e-12:
        return mean + sb * sd, dmean
    return mean + sb * sd, dmean + sb * dvar / (2.0 * sd)


def asymptotic_value(beta_t: float, theta: float) -> float:
    """Limit of the UCB acquisition far from all observations."""
    if beta_t < 0 or theta < 0:
        raise ValueError("beta and theta must be >= 0")
    return float(np.sqrt(beta_t) * theta)
