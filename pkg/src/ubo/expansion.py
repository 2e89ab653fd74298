"""Search-space expansion: the closed-form expansion radius, the
union-of-balls region with its encompassing hypercube, and the regret
upper bound that triggers the next expansion.

The expansion radius is the distance beyond which the acquisition is
provably within epsilon/2 of its far-field limit sqrt(beta) * theta, so a
union of balls of that radius around the observations is guaranteed to
contain a near-maximal acquisition point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernels import KernelSpec, kernel_inverse_radius

# Degenerate-weight guard: when M = 0 the mean term vanishes identically,
# so only the variance-driven threshold applies; cap just below theta^2 to
# stay in the valid domain of the kernel inversion.
GAMMA_CAP = 1.0 - 1e-9


@dataclass(frozen=True)
class SearchRegion:
    """Union of balls around the observations plus its bounding hypercube."""

    k: int
    centers: np.ndarray
    radius: float
    lower: np.ndarray
    upper: np.ndarray
    user_box: bool = False

    def __post_init__(self):
        object.__setattr__(self, "centers", np.atleast_2d(np.asarray(self.centers, dtype=float)))
        object.__setattr__(self, "lower", np.asarray(self.lower, dtype=float).ravel())
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=float).ravel())
        if np.any(self.upper < self.lower):
            raise ValueError("hypercube upper bounds must be >= lower bounds")

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def longest_side(self) -> float:
        return float(np.max(self.upper - self.lower))

    def in_hypercube(self, x) -> bool:
        x = np.asarray(x, dtype=float).ravel()
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def in_union_of_balls(self, x) -> bool:
        x = np.asarray(x, dtype=float).ravel()
        d = np.linalg.norm(self.centers - x[None, :], axis=1)
        return bool(np.any(d <= self.radius))

    def clip(self, x) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float).ravel(), self.lower, self.upper)


def from_box(lower, upper) -> SearchRegion:
    """Wrap a plain box (e.g. the user-defined space) as a SearchRegion."""
    lower = np.asarray(lower, dtype=float).ravel()
    upper = np.asarray(upper, dtype=float).ravel()
    center = 0.5 * (lower + upper)
    return SearchRegion(
        k=0,
        centers=center[None, :],
        radius=float(np.linalg.norm(upper - lower) / 2.0),
        lower=lower,
        upper=upper,
        user_box=True,
    )


def expansion_radius(
    lambda_max: float,
    weight_bound: float,
    n: int,
    kernel: KernelSpec,
    beta_t: float,
    epsilon: float,
) -> float:
    """Ball radius guaranteeing near-flat acquisition outside the balls.

    The covariance threshold is the minimum of a variance-driven term and
    a mean-driven term; the radius is the kernel-specific distance at which
    the covariance falls below that threshold.
    """
    if n < 1:
        raise ValueError("expansion radius requires at least one observation")
    if lambda_max <= 0:
        raise ValueError("lambda_max must be > 0")
    theta = kernel.theta
    sb = np.sqrt(beta_t)
    if epsilon <= 0 or epsilon >= 4.0 * sb * theta:
        raise ValueError(
            f"epsilon must be in (0, 4 sqrt(beta) theta); got {epsilon}"
        )
    theta2 = theta**2
    radicand = (sb * theta * epsilon / 2.0 - epsilon**2 / 16.0) / (n * lambda_max)
    gamma1 = np.sqrt(radicand) / sb
    if weight_bound > 0:
        gamma2 = 0.25 * epsilon / weight_bound
        gamma = min(gamma1, gamma2)
    else:
        gamma = min(gamma1, theta2 * GAMMA_CAP)
    # Cap strictly below theta^2: any radius at least as large as the exact
    # one remains sound, and a zero radius would degenerate the region.
    gamma = min(max(gamma, 1e-300), theta2 * GAMMA_CAP)
    return kernel_inverse_radius(kernel, gamma)


def build_region(observations, d_eps: float, k: int = 1) -> SearchRegion:
    """Union of balls of radius d_eps around the observations, with the
    per-dimension encompassing hypercube [min_i x_i - d_eps, max_i x_i + d_eps].
    """
    obs = np.atleast_2d(np.asarray(observations, dtype=float))
    if obs.shape[0] < 1:
        raise ValueError("at least one observation is required")
    if d_eps <= 0:
        raise ValueError("d_eps must be > 0")
    lower = obs.min(axis=0) - d_eps
    upper = obs.max(axis=0) + d_eps
    return SearchRegion(
        k=k, centers=obs, radius=float(d_eps), lower=lower, upper=upper
    )


def regret_upper_bound(ucb_at_suggestion: float, best_lcb: float, t_local: int) -> float:
    """Computable upper bound on the local regret: expansion fires at <= epsilon."""
    if t_local < 1:
        raise ValueError("t_local must be >= 1")
    return float(ucb_at_suggestion - best_lcb + 1.0 / float(t_local) ** 2)


@dataclass
class TriggerState:
    """Bookkeeping for epoch-local iteration counts and the last trigger value."""

    epsilon: float
    t_k: int = 0
    epoch_lengths: list = field(default_factory=list)
    last_r_b: float | None = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")

    def t_local(self, t: int) -> int:
        return t - self.t_k

    def should_expand(self, r_b: float, t: int) -> bool:
        self.last_r_b = r_b
        return r_b <= self.epsilon or t == 1

    def record_expansion(self, t: int) -> None:
        length = self.t_local(t)
        if length < 1:
            raise ValueError("expansion recorded before any local iteration")
        self.epoch_lengths.append(length)
        self.t_k += length
