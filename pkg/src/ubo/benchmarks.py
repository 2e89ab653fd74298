"""Synthetic benchmark objectives with ground truth, initial-box placement
and Latin-hypercube initialization, plus aggregation of repeated runs.

All objectives are in maximization form (standard minimization test
functions are negated).  The canonical domain box is metadata used for
placing the initial search space; evaluators are finite on all of R^d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Benchmark:
    name: str
    dim: int
    domain_lower: np.ndarray
    domain_upper: np.ndarray
    evaluate: Callable[[np.ndarray], float]
    argmax: np.ndarray
    max_value: float

    def __post_init__(self):
        object.__setattr__(self, "domain_lower", np.asarray(self.domain_lower, dtype=float))
        object.__setattr__(self, "domain_upper", np.asarray(self.domain_upper, dtype=float))
        object.__setattr__(self, "argmax", np.asarray(self.argmax, dtype=float))


def _beale(x):
    x1, x2 = float(x[0]), float(x[1])
    return -(
        (1.5 - x1 + x1 * x2) ** 2
        + (2.25 - x1 + x1 * x2**2) ** 2
        + (2.625 - x1 + x1 * x2**3) ** 2
    )


def _eggholder(x):
    x1, x2 = float(x[0]), float(x[1])
    term1 = -(x2 + 47.0) * np.sin(np.sqrt(abs(x1 / 2.0 + x2 + 47.0)))
    term2 = -x1 * np.sin(np.sqrt(abs(x1 - (x2 + 47.0))))
    return -(term1 + term2)


def _levy(x):
    x = np.asarray(x, dtype=float)
    w = 1.0 + (x - 1.0) / 4.0
    head = np.sin(np.pi * w[0]) ** 2
    mid = np.sum((w[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[:-1] + 1.0) ** 2))
    tail = (w[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[-1]) ** 2)
    return -(head + mid + tail)


def _ackley(x):
    x = np.asarray(x, dtype=float)
    d = x.size
    s1 = np.sqrt(np.sum(x * x) / d)
    s2 = np.sum(np.cos(2.0 * np.pi * x)) / d
    return -(-20.0 * np.exp(-0.2 * s1) - np.exp(s2) + 20.0 + np.e)


_HARTMAN3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HARTMAN3_P = 1e-4 * np.array(
    [
        [3689.0, 1170.0, 2673.0],
        [4699.0, 4387.0, 7470.0],
        [1091.0, 8732.0, 5547.0],
        [381.0, 5743.0, 8828.0],
    ]
)
_HARTMAN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HARTMAN6_P = 1e-4 * np.array(
    [
        [1312.0, 1696.0, 5569.0, 124.0, 8283.0, 5886.0],
        [2329.0, 4135.0, 8307.0, 3736.0, 1004.0, 9991.0],
        [2348.0, 1451.0, 3522.0, 2883.0, 3047.0, 6650.0],
        [4047.0, 8828.0, 8732.0, 5743.0, 1091.0, 381.0],
    ]
)
_HARTMAN_C = np.array([1.0, 1.2, 3.0, 3.2])


def _hartman(A, P):
    def f(x):
        x = np.asarray(x, dtype=float)
        inner = np.sum(A * (x[None, :] - P) ** 2, axis=1)
        return float(np.sum(_HARTMAN_C * np.exp(-inner)))

    return f


def levy(dim: int) -> Benchmark:
    return Benchmark(
        name=f"levy{dim}",
        dim=dim,
        domain_lower=np.full(dim, -10.0),
        domain_upper=np.full(dim, 10.0),
        evaluate=_levy,
        argmax=np.ones(dim),
        max_value=0.0,
    )


def ackley(dim: int) -> Benchmark:
    return Benchmark(
        name=f"ackley{dim}",
        dim=dim,
        domain_lower=np.full(dim, -32.768),
        domain_upper=np.full(dim, 32.768),
        evaluate=_ackley,
        argmax=np.zeros(dim),
        max_value=0.0,
    )


BENCHMARKS: dict[str, Benchmark] = {
    "beale": Benchmark(
        name="beale",
        dim=2,
        domain_lower=np.full(2, -4.5),
        domain_upper=np.full(2, 4.5),
        evaluate=_beale,
        argmax=np.array([3.0, 0.5]),
        max_value=0.0,
    ),
    "eggholder": Benchmark(
        name="eggholder",
        dim=2,
        domain_lower=np.full(2, -512.0),
        domain_upper=np.full(2, 512.0),
        evaluate=_eggholder,
        argmax=np.array([512.0, 404.2319]),
        max_value=959.6407,
    ),
    "levy3": levy(3),
    "levy10": levy(10),
    "hartman3": Benchmark(
        name="hartman3",
        dim=3,
        domain_lower=np.zeros(3),
        domain_upper=np.ones(3),
        evaluate=_hartman(_HARTMAN3_A, _HARTMAN3_P),
        argmax=np.array([0.114614, 0.555649, 0.852547]),
        max_value=3.86278,
    ),
    "hartman6": Benchmark(
        name="hartman6",
        dim=6,
        domain_lower=np.zeros(6),
        domain_upper=np.ones(6),
        evaluate=_hartman(_HARTMAN6_A, _HARTMAN6_P),
        argmax=np.array([0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573]),
        max_value=3.32237,
    ),
    "ackley10": ackley(10),
}


def get(name: str) -> Benchmark:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise KeyError(
            f"unknown benchmark {name!r}; available: {sorted(BENCHMARKS)}"
        ) from None


def place_initial_box(benchmark: Benchmark, seed: int, placement: str = "random"):
    """Random initial search box: each side 20% of the canonical domain side,
    center uniform over the domain, shifted to stay inside the domain.

    ``placement`` is one of ``"random"`` (first draw), ``"exclude-argmax"``
    (redraw, seeded, until the true argmax falls outside the box), or
    ``"include-argmax"`` (redraw until it falls inside).
    """
    if placement not in ("random", "exclude-argmax", "include-argmax"):
        raise ValueError(f"unknown placement {placement!r}")
    rng = np.random.default_rng(seed)
    side = 0.2 * (benchmark.domain_upper - benchmark.domain_lower)
    for _ in range(10000):
        center = rng.uniform(benchmark.domain_lower, benchmark.domain_upper)
        lower = np.clip(
            center - side / 2.0,
            benchmark.domain_lower,
            benchmark.domain_upper - side,
        )
        upper = lower + side
        inside = np.all(benchmark.argmax >= lower) and np.all(benchmark.argmax <= upper)
        if placement == "random":
            return lower, upper
        if inside == (placement == "include-argmax"):
            return lower, upper
    raise RuntimeError(f"failed to place an initial box with placement {placement!r}")


def latin_hypercube(lower, upper, count: int, seed: int) -> np.ndarray:
    """Stratified sample: one point per equal-width stratum per dimension."""
    if count < 1:
        raise ValueError("count must be >= 1")
    lower = np.asarray(lower, dtype=float).ravel()
    upper = np.asarray(upper, dtype=float).ravel()
    rng = np.random.default_rng(seed)
    d = lower.size
    u = np.empty((count, d))
    for j in range(d):
        strata = rng.permutation(count)
        u[:, j] = (strata + rng.uniform(size=count)) / count
    return lower + u * (upper - lower)


def aggregate(best_value_curves) -> tuple[np.ndarray, np.ndarray]:
    """Per-iteration mean and standard error over equal-length run curves."""
    curves = [np.asarray(c, dtype=float) for c in best_value_curves]
    if not curves:
        raise ValueError("at least one curve is required")
    length = curves[0].size
    if any(c.size != length for c in curves):
        raise ValueError("curves must have equal length")
    mat = np.vstack(curves)
    mean = mat.mean(axis=0)
    if mat.shape[0] == 1:
        stderr = np.zeros(length)
    else:
        stderr = mat.std(axis=0, ddof=1) / np.sqrt(mat.shape[0])
    return mean, stderr
