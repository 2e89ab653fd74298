"""Gaussian-process regression: posterior inference, the linear-algebra
quantities used by the search-space expansion math, and maximum-likelihood
hyperparameter fitting.

The posterior is backed by a Cholesky factorization of K + sigma^2 I with
escalating jitter.  ``GpPosterior`` is immutable after construction; adding
data means building a new posterior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.optimize import minimize
from scipy.stats import qmc

from .kernels import FAMILIES, KernelSpec, kernel_matrix, scaled_distance

JITTER_START = 1e-10
JITTER_MAX = 1e-4


class NumericError(RuntimeError):
    """Raised when the kernel matrix cannot be factorized even with jitter."""


@dataclass(frozen=True)
class Dataset:
    """Observed inputs/outputs plus the observation-noise variance.

    Values are taken as-is; callers are expected to supply outputs whose
    sample mean is (close to) zero so that the zero prior mean holds.
    """

    points: np.ndarray
    values: np.ndarray
    noise_var: float

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        vals = np.asarray(self.values, dtype=float).ravel()
        if pts.size == 0:
            pts = pts.reshape(0, max(pts.shape[-1], 1) if pts.ndim > 1 else 1)
        if pts.shape[0] != vals.shape[0]:
            raise ValueError("points and values must have equal length")
        if self.noise_var < 0:
            raise ValueError("noise variance must be >= 0")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


class GpPosterior:
    """GP posterior with cached factorization of K + sigma^2 I.

    Exposes the posterior mean/variance, the largest singular value of
    (K + sigma^2 I)^-1 and the solve vector z = (K + sigma^2 I)^-1 y
    needed by the expansion-radius computation.  Thread-safe: all state is
    fixed at construction.
    """

    def __init__(self, data: Dataset, kernel: KernelSpec):
        if data.n > 0 and data.dim != kernel.dim:
            raise ValueError("dataset dimension does not match kernel dimension")
        self.data = data
        self.kernel = kernel
        self._theta2 = kernel.theta**2
        if data.n == 0:
            self._cho = None
            self.z = np.zeros(0)
            self.jitter = 0.0
            return
        K = kernel_matrix(kernel, data.points)
        A = K + data.noise_var * np.eye(data.n)
        self._cho, self.jitter = _factorize(A, self._theta2)
        self.z = cho_solve(self._cho, data.values)

    @property
    def n(self) -> int:
        return self.data.n

    def mean_var(self, X):
        """Posterior mean and variance at query rows X (m, d).

        Variance is clamped at zero from below.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.n == 0:
            m = X.shape[0]
            return np.zeros(m), np.full(m, self._theta2)
        Ks = kernel_matrix(self.kernel, X, self.data.points)  # (m, n)
        mean = Ks @ self.z
        L, lower = self._cho
        V = solve_triangular(L, Ks.T, lower=lower, trans=0 if lower else 1)
        var = self._theta2 - np.sum(V * V, axis=0)
        return mean, np.maximum(var, 0.0)

    def mean_var_point(self, x):
        mean, var = self.mean_var(np.asarray(x, dtype=float)[None, :])
        return float(mean[0]), float(var[0])

    def mean_var_grad(self, x):
        """Mean, variance and their gradients at a single point x.

        Used by gradient-based acquisition maximization.  Returns
        (mean, var, dmean, dvar) with dmean/dvar of shape (d,).
        """
        x = np.asarray(x, dtype=float).ravel()
        d = self.kernel.dim
        if self.n == 0:
            return 0.0, self._theta2, np.zeros(d), np.zeros(d)
        ks = kernel_matrix(self.kernel, x[None, :], self.data.points).ravel()
        J = _kernel_grad(self.kernel, x, self.data.points, ks)  # (n, d)
        mean = float(ks @ self.z)
        w = cho_solve(self._cho, ks)
        var = float(self._theta2 - ks @ w)
        dmean = J.T @ self.z
        dvar = -2.0 * (J.T @ w)
        return mean, max(var, 0.0), dmean, dvar

    @property
    def lambda_max(self) -> float:
        """Largest singular value of (K + sigma^2 I)^-1.

        Computed as the reciprocal of the smallest eigenvalue of the
        factorized matrix; the inverse is never formed.
        """
        if self.n == 0:
            raise ValueError("lambda_max requires at least one observation")
        # cho_factor leaves arbitrary values in the unused triangle, so the
        # factor must be masked before taking singular values.
        L, _ = self._cho
        s = np.linalg.svd(np.tril(L), compute_uv=False)
        return float(1.0 / np.min(s) ** 2)

    @property
    def weight_bound(self) -> float:
        """max of the absolute sums of negative and positive entries of z."""
        if self.n == 0:
            raise ValueError("weight_bound requires at least one observation")
        neg = -np.sum(self.z[self.z <= 0])
        pos = np.sum(self.z[self.z >= 0])
        return float(max(neg, pos))


def _factorize(A, theta2):
    """Cholesky of A with escalating diagonal jitter scaled by theta^2."""
    scale = max(theta2, 1e-300)
    try:
        return cho_factor(A, lower=True), 0.0
    except np.linalg.LinAlgError:
        pass
    jitter = JITTER_START
    while jitter <= JITTER_MAX:
        try:
            c = cho_factor(A + jitter * scale * np.eye(A.shape[0]), lower=True)
            return c, jitter * scale
        except np.linalg.LinAlgError:
            jitter *= 2.0
    raise NumericError("kernel matrix not positive definite after maximum jitter")


def _kernel_grad(kernel: KernelSpec, x, X, ks):
    """Gradient of k(x, x_i) w.r.t. x for each row x_i of X; shape (n, d)."""
    from .kernels import _profile_deriv  # radial derivative of the profile

    diff = (x[None, :] - X) / kernel.lengthscale  # scaled differences, (n, d)
    r = np.linalg.norm(diff, axis=1)
    if kernel.family == "se":
        # d/dx of theta^2 exp(-r^2/2) = -k * u_j / l_j
        return -ks[:, None] * diff / kernel.lengthscale
    drho = _profile_deriv("matern52", r)
    with np.errstate(invalid="ignore", divide="ignore"):
        coef = np.where(r > 0, kernel.theta**2 * drho / np.maximum(r, 1e-300), 0.0)
    return coef[:, None] * diff / kernel.lengthscale


def posterior(data: Dataset, kernel: KernelSpec, x):
    """Posterior mean and variance at a single point (convenience wrapper)."""
    return GpPosterior(data, kernel).mean_var_point(x)


def expansion_quantities(data: Dataset, kernel: KernelSpec):
    """(lambda_max, weight bound M) of the posterior for the expansion math."""
    if data.n < 1:
        raise ValueError("expansion quantities require at least one observation")
    post = GpPosterior(data, kernel)
    return post.lambda_max, post.weight_bound


# ---------------------------------------------------------------------------
# Maximum-likelihood hyperparameter fitting
# ---------------------------------------------------------------------------

THETA_BOUNDS = (1e-3, 1e3)
NOISE_BOUNDS = (1e-8, 1.0)
N_RESTARTS = 8


def log_marginal_likelihood(points, values, kernel: KernelSpec, noise_var: float):
    """Log marginal likelihood of the data under the GP prior."""
    X = np.atleast_2d(np.asarray(points, dtype=float))
    y = np.asarray(values, dtype=float).ravel()
    n = y.size
    K = kernel_matrix(kernel, X)
    A = K + noise_var * np.eye(n)
    cho, _ = _factorize(A, kernel.theta**2)
    alpha = cho_solve(cho, y)
    logdet = 2.0 * np.sum(np.log(np.diag(cho[0])))
    return float(-0.5 * y @ alpha - 0.5 * logdet - 0.5 * n * np.log(2.0 * np.pi))


def _nll_and_grad(params, X, y, family, fixed_noise):
    """Negative LML and gradient in log-parameter space.

    params = (log theta, log l) if fixed_noise is not None,
    else (log theta, log l, log sigma^2).
    """
    n = y.size
    log_theta, log_l = params[0], params[1]
    theta = np.exp(log_theta)
    l = np.exp(log_l)
    noise = fixed_noise if fixed_noise is not None else np.exp(params[2])
    kernel = KernelSpec(family, theta, l, X.shape[1])
    K = kernel_matrix(kernel, X)
    A = K + noise * np.eye(n)
    cho, jit = _factorize(A, theta**2)
    alpha = cho_solve(cho, y)
    logdet = 2.0 * np.sum(np.log(np.diag(cho[0])))
    nll = 0.5 * y @ alpha + 0.5 * logdet + 0.5 * n * np.log(2.0 * np.pi)

    Ainv = cho_solve(cho, np.eye(n))
    W = np.outer(alpha, alpha) - Ainv

    r = scaled_distance(kernel, X, X)
    # dK/dlog theta = 2 K (noiseless part)
    dK_dlt = 2.0 * K
    if family == "se":
        dK_dll = K * r * r
    else:
        from .kernels import SQRT5

        dK_dll = theta**2 * (5.0 / 3.0) * r * r * (1.0 + SQRT5 * r) * np.exp(-SQRT5 * r)
    g = [
        -0.5 * np.sum(W * dK_dlt),
        -0.5 * np.sum(W * dK_dll),
    ]
    if fixed_noise is None:
        g.append(-0.5 * np.trace(W) * noise)
    return float(nll), np.array(g)


def fit_hyperparameters(
    data: Dataset,
    family: str = "se",
    domain_diameter: float = 1.0,
    seed: int = 0,
    n_restarts: int = N_RESTARTS,
    fixed_noise: float | None = None,
    default: tuple[KernelSpec, float] | None = None,
):
    """Multistart maximum-likelihood fit of (theta, l, sigma^2).

    Parameters are optimized in log space with L-BFGS-B under fixed bounds;
    the start set is a seeded Sobol design plus a mid-bounds start, so the
    result is deterministic given the seed.  With fewer than two
    observations the configured default kernel is returned with the
    ``fitted`` flag set to False.

    Returns (kernel, noise_var, fitted).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown kernel family {family!r}")
    dim = data.dim if data.n else 1
    if default is None:
        default = (KernelSpec(family, 1.0, max(domain_diameter / 4.0, 1e-3), dim), 1e-4)
    if data.n < 2:
        return default[0], default[1], False

    X, y = data.points, data.values
    l_bounds = (1e-3 * domain_diameter, 10.0 * domain_diameter)
    lo = [np.log(THETA_BOUNDS[0]), np.log(l_bounds[0])]
    hi = [np.log(THETA_BOUNDS[1]), np.log(l_bounds[1])]
    if fixed_noise is None:
        lo.append(np.log(NOISE_BOUNDS[0]))
        hi.append(np.log(NOISE_BOUNDS[1]))
    lo, hi = np.array(lo), np.array(hi)

    sob = qmc.Sobol(d=lo.size, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(n_restarts - 1, 1))))
    starts = lo + sob.random_base2(m)[: max(n_restarts - 1, 1)] * (hi - lo)
    starts = np.vstack([0.5 * (lo + hi), starts])[:n_restarts]

    best = None
    for x0 in starts:
        res = minimize(
            _nll_and_grad,
            x0,
            args=(X, y, family, fixed_noise),
            jac=True,
            method="L-BFGS-B",
            bounds=list(zip(lo, hi)),
            options={"maxiter": 200, "ftol": 1e-14, "gtol": 1e-10},
        )
        if best is None or res.fun < best.fun:
            best = res
    theta = float(np.exp(best.x[0]))
    l = float(np.exp(best.x[1]))
    noise = fixed_noise if fixed_noise is not None else float(np.exp(best.x[2]))
    return KernelSpec(family, theta, l, data.dim), noise, True
