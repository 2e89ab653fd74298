"""Acceptance gate: ten end-to-end criteria, one printed PASS/FAIL line each.

Run with ``pytest -v`` (add ``-s`` to stream the lines live).  Each test
computes its verdict, prints exactly one summary line, then asserts.
"""

import csv
import time

import numpy as np
import pytest
from click.testing import CliRunner

from ubo.acq_opt import _maximize_ucb
from ubo.acquisition import BetaSchedule, beta, lcb_batch, ucb, ucb_batch
from ubo.benchmarks import BENCHMARKS, latin_hypercube
from ubo.cli import main as cli_main
from ubo.engine import RunConfig, run_ubo
from ubo.experiment import run_single
from ubo.expansion import (
    build_region,
    expansion_radius,
    regret_upper_bound,
)
from ubo.gp import Dataset, GpPosterior, expansion_quantities, fit_hyperparameters
from ubo.kernels import KernelSpec, kernel_inverse_radius, kernel_matrix, kernel_vector


def report(number, name, ok, detail=""):
    verdict = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {number} {name}: {verdict}"
    if detail:
        line += f" ({detail})"
    print(line)
    return ok


def random_dataset(rng, n_max=15, d_max=5):
    n = int(rng.integers(1, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    family = "se" if rng.random() < 0.5 else "matern52"
    kern = KernelSpec(
        family, float(rng.uniform(0.3, 2.5)), float(rng.uniform(0.3, 2.0)), d
    )
    X = rng.normal(size=(n, d)) * 2.0
    y = rng.normal(size=n)
    noise = float(rng.uniform(1e-4, 0.5))
    return Dataset(X, y, noise), kern


def test_criterion_1_posterior_matches_dense_oracle():
    start = time.monotonic()
    rng = np.random.default_rng(201)
    worst = 0.0
    for _ in range(100):
        data, kern = random_dataset(rng)
        post = GpPosterior(data, kern)
        x = rng.normal(size=data.dim) * 2.0
        mean, var = post.mean_var_point(x)
        K = kernel_matrix(kern, data.points)
        A_inv = np.linalg.inv(K + data.noise_var * np.eye(data.n))
        ks = kernel_vector(kern, data.points, x)
        dm = float(ks @ A_inv @ data.values)
        dv = float(max(kern.theta**2 - ks @ A_inv @ ks, 0.0))
        scale = max(abs(dm), abs(dv), 1.0)
        worst = max(worst, abs(mean - dm) / scale, abs(var - dv) / scale)
    elapsed = time.monotonic() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    assert report(1, "posterior equals dense oracle", ok,
                  f"max rel err {worst:.2e}, {elapsed:.1f}s")


def test_criterion_2_far_field_limit():
    start = time.monotonic()
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(50):
        data, kern = random_dataset(rng, n_max=20, d_max=3)
        post = GpPosterior(data, kern)
        beta_t = float(rng.uniform(1.0, 9.0))
        far = 10.0 * kernel_inverse_radius(kern, 1e-6 * kern.theta**2)
        x = data.points.max(axis=0) + far * np.ones(data.dim) / np.sqrt(data.dim)
        limit = np.sqrt(beta_t) * kern.theta
        worst = max(worst, abs(ucb(post, x, beta_t) - limit) / limit)
    elapsed = time.monotonic() - start
    ok = worst <= 1e-3 and elapsed < 5.0
    assert report(2, "far-field acquisition limit", ok,
                  f"max rel dev {worst:.2e}, {elapsed:.1f}s")


def test_criterion_3_radius_soundness():
    start = time.monotonic()
    rng = np.random.default_rng(203)
    violations = 0
    checked = 0
    for _ in range(50):
        data, kern = random_dataset(rng, n_max=20, d_max=3)
        post = GpPosterior(data, kern)
        beta_t = float(rng.uniform(1.0, 9.0))
        eps = float(rng.uniform(0.01, 0.5 * 4.0 * np.sqrt(beta_t) * kern.theta))
        d_eps = expansion_radius(
            post.lambda_max, post.weight_bound, data.n, kern, beta_t, eps
        )
        limit = np.sqrt(beta_t) * kern.theta
        samples = np.empty((0, data.dim))
        while samples.shape[0] < 1000:
            base = data.points[rng.integers(data.n, size=4000)]
            dirs = rng.normal(size=(4000, data.dim))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            cand = base + dirs * (d_eps * rng.uniform(1.0, 3.0, size=(4000, 1)))
            dists = np.linalg.norm(
                cand[:, None, :] - data.points[None, :, :], axis=2
            ).min(axis=1)
            samples = np.vstack([samples, cand[dists >= d_eps]])
        samples = samples[:1000]
        dev = np.abs(limit - ucb_batch(post, samples, beta_t))
        violations += int(np.sum(dev > eps / 2.0 + 1e-9))
        checked += samples.shape[0]
    elapsed = time.monotonic() - start
    ok = violations == 0 and elapsed < 60.0
    assert report(3, "expansion radius soundness", ok,
                  f"{violations} violations over {checked} points, {elapsed:.1f}s")


def test_criterion_4_worked_radius_example():
    data = Dataset(np.array([[0.0]]), np.array([1.0]), 0.01)
    kern = KernelSpec("se", 1.0, 1.0, 1)
    lam, m = expansion_quantities(data, kern)
    d_eps = expansion_radius(lam, m, 1, kern, 4.0, 0.1)
    ok = abs(d_eps - 2.7125) <= 1e-3
    assert report(4, "worked expansion-radius example", ok, f"d_eps {d_eps:.5f}")


def test_criterion_5_worked_beta_example():
    value = beta(BetaSchedule(delta=0.1, dim=2, r_k=1.0, scale=1.0), 1)
    ok = abs(value - 14.10) <= 1e-2
    assert report(5, "worked exploration-weight example", ok, f"beta {value:.4f}")


def test_criterion_6_trigger_fires_on_fixed_box():
    start = time.monotonic()
    fired = 0
    for seed in range(10):
        X = list(latin_hypercube([0.0], [1.0], 3, seed=seed))
        y = [-float((x[0] - 0.6) ** 2) for x in X]
        noise = 1e-6
        hit = False
        for t in range(1, 31):
            ys = np.asarray(y)
            scale = ys.std() if ys.std() > 1e-12 else 1.0
            y_std = (ys - ys.mean()) / scale
            data = Dataset(np.array(X), y_std, noise)
            kern, nz, _ = fit_hyperparameters(
                data, "se", domain_diameter=1.0, seed=seed, fixed_noise=noise
            )
            post = GpPosterior(Dataset(np.array(X), y_std, nz), kern)
            beta_t = beta(BetaSchedule(delta=0.1, dim=1, r_k=1.0, scale=0.2), t)
            x_t, u = _maximize_ucb(post, beta_t, [0.0], [1.0], seed=seed * 100 + t,
                                   extra_start=None)
            X.append(x_t)
            y.append(-float((x_t[0] - 0.6) ** 2))
            best_lcb = float(np.max(lcb_batch(post, np.array(X), beta_t)))
            if regret_upper_bound(u, best_lcb, t) <= 0.05:
                hit = True
                break
        fired += hit
    elapsed = time.monotonic() - start
    ok = fired == 10 and elapsed < 60.0
    assert report(6, "trigger existence on fixed box", ok,
                  f"{fired}/10 seeds, {elapsed:.1f}s")


def test_criterion_7_expansion_recovers_excluded_argmax():
    start = time.monotonic()
    argmax = BENCHMARKS["beale"].argmax
    contained = 0
    all_expand = True
    for seed in range(30):
        _, trace = run_single({"benchmark": "beale", "strategy": "ubo",
                               "seed": seed, "placement": "exclude-argmax"})
        lo, hi = trace.final_box
        contained += bool(np.all(argmax >= lo) and np.all(argmax <= hi))
        all_expand &= any(r.expanded for r in trace.records)
    elapsed = time.monotonic() - start
    ok = contained >= 24 and all_expand and elapsed < 600.0
    assert report(7, "excluded argmax recovered by expansion", ok,
                  f"{contained}/30 contained, all expand {all_expand}, {elapsed:.0f}s")


def test_criterion_8_outperforms_baselines():
    start = time.monotonic()
    ok = True
    details = []
    for bench in ("beale", "hartman3"):
        finals = {}
        for strategy in ("ubo", "vanilla-fixed-box", "volume-doubling"):
            vals = []
            for seed in range(30):
                _, trace = run_single(
                    {"benchmark": bench, "strategy": strategy, "seed": seed}
                )
                vals.append(trace.best_curve[-1])
            finals[strategy] = np.array(vals)
        mean = {s: float(v.mean()) for s, v in finals.items()}
        se = {s: float(v.std(ddof=1) / np.sqrt(30)) for s, v in finals.items()}
        pooled = np.sqrt(se["ubo"] ** 2 + se["volume-doubling"] ** 2)
        ok &= mean["ubo"] >= mean["vanilla-fixed-box"]
        ok &= mean["ubo"] >= mean["volume-doubling"] - pooled
        details.append(
            f"{bench}: ubo {mean['ubo']:.3f} vs vanilla "
            f"{mean['vanilla-fixed-box']:.3f} vs doubling "
            f"{mean['volume-doubling']:.3f} (pooled se {pooled:.3f})"
        )
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 1800.0
    assert report(8, "mean final value beats baselines", ok,
                  "; ".join(details) + f", {elapsed:.0f}s")


def test_criterion_9_cli_determinism(tmp_path):
    runner = CliRunner()
    payloads = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        out.mkdir()
        result = runner.invoke(
            cli_main,
            ["run", "--benchmark", "beale", "--seed", "5", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        payloads.append((out / "run_beale_ubo_seed5.csv").read_bytes())
    ok = payloads[0] == payloads[1]
    assert report(9, "byte-identical reruns", ok, f"{len(payloads[0])} bytes")


def test_criterion_10_invariant_suite():
    failures = []

    # Region containment + monotone best + epoch accounting on a real run.
    cfg = RunConfig(
        strategy="ubo",
        objective=BENCHMARKS["beale"].evaluate,
        box_lower=[-1.0, -1.0], box_upper=[0.8, 0.8],
        budget=12, init_count=6, seed=11,
    )
    trace = run_ubo(cfg)
    records = [r for r in trace.records if r.t >= 1]
    prev_lo, prev_hi = trace.records[0].lo, trace.records[0].hi
    t_local = 0
    epochs_done = 0
    for r in records:
        t_local += 1
        if not (np.all(r.x >= prev_lo - 1e-9) and np.all(r.x <= prev_hi + 1e-9)):
            failures.append(f"t={r.t}: suggestion outside region")
        if epochs_done + t_local != r.t:
            failures.append(f"t={r.t}: epoch accounting broken")
        if r.expanded:
            epochs_done += t_local
            t_local = 0
        prev_lo, prev_hi = r.lo, r.hi
    if np.any(np.diff(trace.best_curve) < 0):
        failures.append("best-so-far curve decreased")

    # Radius growth where the variance-driven threshold binds.
    kern = KernelSpec("se", 1.0, 1.0, 1)
    radii = [expansion_radius(0.99, 0.0, n, kern, 4.0, 0.1)
             for n in (1, 2, 4, 8, 16)]
    if not all(b > a for a, b in zip(radii, radii[1:])):
        failures.append("radius not growing with n in the binding regime")

    # Hypercube growth under observation supersets.
    rng = np.random.default_rng(210)
    obs = rng.normal(size=(5, 2))
    r1 = build_region(obs, 0.6, k=1)
    r2 = build_region(np.vstack([obs, rng.normal(size=(3, 2))]), 0.8, k=2)
    if not (np.all(r2.lower <= r1.lower) and np.all(r2.upper >= r1.upper)):
        failures.append("hypercube shrank under superset")

    ok = not failures
    assert report(10, "structural invariants", ok, "; ".join(failures) or "all hold")
