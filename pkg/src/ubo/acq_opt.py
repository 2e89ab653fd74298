"""Inner maximization of the acquisition over a box, with the per-ball
refinement that stops the encompassing hypercube from pushing suggestions
into artificial corners.

The box maximizer is multistart L-BFGS-B: 31 starts from a seeded Sobol
set plus the best observed point.  Ties are broken lexicographically on
coordinates so results are deterministic given the seed.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .acquisition import ucb_batch, ucb_grad
from .expansion import SearchRegion, build_region

N_STARTS = 32
MAX_ITER = 200
FD_STEP_FRACTION = 1e-6


def maximize_over_box(objective, lower, upper, seed=0, extra_start=None, jac=None,
                      n_starts=N_STARTS):
    """Maximize a continuous objective over the box [lower, upper].

    ``objective`` maps a point (d,) to a scalar.  If ``jac`` is given it must
    return (value, gradient); otherwise gradients are taken by central
    differences with step 1e-6 of the box side.  Degenerate dimensions
    (lower == upper) are held fixed and the ascent runs over the rest.

    Returns (argmax, max value).
    """
    lower = np.asarray(lower, dtype=float).ravel()
    upper = np.asarray(upper, dtype=float).ravel()
    if np.any(upper < lower):
        raise ValueError("upper must be >= lower")
    d = lower.size
    side = upper - lower
    free = side > 0

    n_sobol = max(n_starts - 1, 1)
    sob = qmc.Sobol(d=d, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(n_sobol)))
    starts = lower + sob.random_base2(m)[:n_sobol] * side
    if extra_start is not None:
        extra = np.clip(np.asarray(extra_start, dtype=float).ravel(), lower, upper)
        starts = np.vstack([extra, starts])

    if not np.any(free):
        x = lower.copy()
        return x, float(objective(x))

    steps = np.where(free, FD_STEP_FRACTION * side, 0.0)

    def neg_with_grad(z):
        x = lower.copy()
        x[free] = z
        if jac is not None:
            v, g = jac(x)
            return -v, -np.asarray(g, dtype=float)[free]
        v = objective(x)
        g = np.zeros(d)
        for j in np.flatnonzero(free):
            e = np.zeros(d)
            e[j] = steps[j]
            g[j] = (objective(np.clip(x + e, lower, upper))
                    - objective(np.clip(x - e, lower, upper))) / (2.0 * steps[j])
        return -v, -g[free]

    bounds = list(zip(lower[free], upper[free]))
    best_x, best_v = None, -np.inf
    for s in starts:
        res = minimize(
            neg_with_grad,
            s[free],
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": MAX_ITER},
        )
        x = lower.copy()
        x[free] = np.clip(res.x, lower[free], upper[free])
        v = float(objective(x))
        if v > best_v or (v == best_v and best_x is not None
                          and tuple(x) < tuple(best_x)):
            best_x, best_v = x, v
    return best_x, best_v


def _maximize_ucb(post, beta_t, lower, upper, seed, extra_start, n_starts=N_STARTS):
    def obj(x):
        m, v = post.mean_var_point(x)
        return m + np.sqrt(beta_t) * np.sqrt(v)

    def val_grad(x):
        return ucb_grad(post, x, beta_t)

    return maximize_over_box(obj, lower, upper, seed=seed,
                             extra_start=extra_start, jac=val_grad,
                             n_starts=n_starts)


def refined_maximize(post, beta_t, epsilon, region: SearchRegion, seed=0,
                     extra_start=None):
    """Suggest the next evaluation point inside the region's hypercube.

    First maximize over the full hypercube.  If the maximum clears the
    far-field band (above sqrt(beta) theta, or below sqrt(beta) theta -
    epsilon) the argmax is trusted as-is.  Otherwise the argmax may be an
    artifact of the bounding box, so per-ball hypercubes are searched in
    descending order of the acquisition at their centers; the first
    maximizer below the band is returned, falling back to the best
    per-ball maximizer when none qualifies.

    Returns (point, acquisition value).
    """
    limit = np.sqrt(beta_t) * post.kernel.theta
    x_big, v_big = _maximize_ucb(post, beta_t, region.lower, region.upper,
                                 seed, extra_start)
    if region.user_box or v_big > limit or v_big < limit - epsilon:
        return x_big, v_big

    centers = region.centers
    order = np.argsort(-ucb_batch(post, centers, beta_t), kind="stable")
    best_x, best_v = None, -np.inf
    for rank, i in enumerate(order):
        lo = np.maximum(centers[i] - region.radius, region.lower)
        hi = np.minimum(centers[i] + region.radius, region.upper)
        x, v = _maximize_ucb(post, beta_t, lo, hi, seed + 1 + rank,
                             extra_start, n_starts=8)
        if v < limit - epsilon:
            return x, v
        if v > best_v:
            best_x, best_v = x, v
    # Refinement is a restriction of the big-box problem; never report a
    # point as beating the big-box maximum.
    if best_v > v_big:
        return x_big, v_big
    return best_x, best_v
