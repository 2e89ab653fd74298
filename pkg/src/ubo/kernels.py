"""Stationary covariance kernels and the covariance-threshold distance.

Two families are supported: the squared exponential and Matern-5/2.  Both
are written in terms of the scaled distance r = ||(x - x') / l||_2 so that
per-dimension lengthscales are allowed.  Besides pointwise and matrix
evaluation, the module exposes ``inverse_radius``: the distance beyond
which the covariance is guaranteed to fall below a given threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT5 = np.sqrt(5.0)

FAMILIES = ("se", "matern52")


@dataclass(frozen=True)
class KernelSpec:
    """A stationary kernel: family, output scale theta and lengthscale(s).

    ``lengthscale`` may be a scalar (isotropic) or one value per input
    dimension.  ``theta`` is the output scale, so k(x, x) = theta**2.
    """

    family: str
    theta: float
    lengthscale: np.ndarray
    dim: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        ls = np.atleast_1d(np.asarray(self.lengthscale, dtype=float))
        if ls.size == 1:
            ls = np.full(self.dim, float(ls[0]))
        if ls.shape != (self.dim,):
            raise ValueError("lengthscale must be scalar or one per dimension")
        if np.any(ls <= 0):
            raise ValueError("lengthscale must be > 0")
        object.__setattr__(self, "lengthscale", ls)

    @property
    def max_lengthscale(self) -> float:
        return float(np.max(self.lengthscale))


def _profile(family: str, r):
    """Radial profile rho(r) with rho(0) = 1, for scaled distance r >= 0."""
    r = np.asarray(r, dtype=float)
    if family == "se":
        return np.exp(-0.5 * r * r)
    f = 1.0 + SQRT5 * r + (5.0 / 3.0) * r * r
    return f * np.exp(-SQRT5 * r)


def _profile_deriv(family: str, r):
    """d rho / d r for scaled distance r >= 0."""
    r = np.asarray(r, dtype=float)
    if family == "se":
        return -r * np.exp(-0.5 * r * r)
    return -(5.0 / 3.0) * r * (1.0 + SQRT5 * r) * np.exp(-SQRT5 * r)


def kernel_eval(kernel: KernelSpec, x, x2) -> float:
    """Evaluate k(x, x2) for a single pair of points."""
    x = np.asarray(x, dtype=float).ravel()
    x2 = np.asarray(x2, dtype=float).ravel()
    if x.shape != (kernel.dim,) or x2.shape != (kernel.dim,):
        raise ValueError(
            f"points must have dimension {kernel.dim}, got {x.shape} and {x2.shape}"
        )
    r = np.linalg.norm((x - x2) / kernel.lengthscale)
    return float(kernel.theta**2 * _profile(kernel.family, r))


def scaled_distance(kernel: KernelSpec, X, X2) -> np.ndarray:
    """Pairwise scaled distances between rows of X (n,d) and X2 (m,d)."""
    X = np.atleast_2d(np.asarray(X, dtype=float)) / kernel.lengthscale
    X2 = np.atleast_2d(np.asarray(X2, dtype=float)) / kernel.lengthscale
    d2 = (
        np.sum(X * X, axis=1)[:, None]
        + np.sum(X2 * X2, axis=1)[None, :]
        - 2.0 * X @ X2.T
    )
    return np.sqrt(np.maximum(d2, 0.0))


def kernel_matrix(kernel: KernelSpec, X, X2=None) -> np.ndarray:
    """Covariance matrix between rows of X and X2 (X2 defaults to X)."""
    if X2 is None:
        X2 = X
    r = scaled_distance(kernel, X, X2)
    return kernel.theta**2 * _profile(kernel.family, r)


def kernel_vector(kernel: KernelSpec, X, x) -> np.ndarray:
    """Covariances k(x, x_i) between one point and the rows of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    x = np.asarray(x, dtype=float).ravel()
    return kernel_matrix(kernel, X, x[None, :]).ravel()


def kernel_inverse_radius(kernel: KernelSpec, gamma: float) -> float:
    """Distance g such that ||x - x'|| >= g implies k(x, x') <= gamma.

    For the squared exponential the closed form sqrt(2 l^2 log(theta^2/gamma))
    is used; for Matern-5/2 the monotone radial profile is inverted by
    bisection.  The largest lengthscale is used, which upper-bounds the
    covariance for anisotropic kernels.
    """
    theta2 = kernel.theta**2
    if gamma <= 0 or gamma > theta2:
        raise ValueError(f"gamma must be in (0, theta^2]; got {gamma}")
    l = kernel.max_lengthscale
    ratio = gamma / theta2
    if ratio >= 1.0:
        return 0.0
    if kernel.family == "se":
        return float(l * np.sqrt(2.0 * np.log(1.0 / ratio)))
    # Matern-5/2: bisect rho(r) = ratio on the scaled axis.
    lo, hi = 0.0, 1.0
    while _profile("matern52", hi) > ratio:
        hi *= 2.0
        if hi > 1e8:
            raise RuntimeError("failed to bracket the kernel profile inversion")
    while hi - lo > 1e-10 / max(l, 1.0):
        mid = 0.5 * (lo + hi)
        if _profile("matern52", mid) > ratio:
            lo = mid
        else:
            hi = mid
    return float(l * 0.5 * (lo + hi))
