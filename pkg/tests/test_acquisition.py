"""Confidence-bound acquisitions and the per-space exploration schedule."""

import numpy as np
import pytest

from ubo.acquisition import (
    BetaSchedule,
    asymptotic_value,
    beta,
    lcb,
    lcb_batch,
    ucb,
    ucb_batch,
    ucb_grad,
)
from ubo.gp import Dataset, GpPosterior
from ubo.kernels import KernelSpec, kernel_inverse_radius


def single_point_post(theta=1.0, noise=0.01, y1=1.0):
    data = Dataset(np.array([[0.0]]), np.array([y1]), noise)
    return GpPosterior(data, KernelSpec("se", theta, 1.0, 1))


class TestBetaSchedule:
    def test_worked_example_theory_mode(self):
        sched = BetaSchedule(delta=0.1, dim=2, r_k=1.0)
        expect = 2.0 * np.log(2.0 * np.pi**2 / 0.3) + 4.0 * np.log(
            2.0 * np.sqrt(np.log(80.0))
        )
        assert beta(sched, 1) == pytest.approx(expect, abs=1e-9)
        assert beta(sched, 1) == pytest.approx(14.100, abs=1e-2)

    def test_worked_example_experiment_mode(self):
        sched = BetaSchedule(delta=0.1, dim=2, r_k=1.0, scale=0.2)
        assert beta(sched, 1) == pytest.approx(14.100 / 5.0, abs=2e-3)
        assert beta(sched, 1) == pytest.approx(2.820, abs=2e-3)

    def test_monotone_in_t_local(self):
        sched = BetaSchedule(delta=0.1, dim=2, r_k=1.0)
        values = [beta(sched, t) for t in range(1, 12)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert beta(sched, 4) > beta(sched, 1)

    def test_positive_even_for_tiny_spaces(self):
        sched = BetaSchedule(delta=0.9, dim=1, r_k=1e-8, scale=0.2)
        assert beta(sched, 1) > 0.0

    def test_reset_semantics_is_pure_function_of_t_local(self):
        # After an expansion the engine passes t_local = 1 again; the schedule
        # itself is stateless so the value matches the first iteration's.
        sched = BetaSchedule(delta=0.1, dim=2, r_k=3.0, scale=0.2)
        assert beta(sched, 1) == beta(sched, 1)

    def test_validation(self):
        with pytest.raises(ValueError):
            BetaSchedule(delta=0.0, dim=2, r_k=1.0)
        with pytest.raises(ValueError):
            BetaSchedule(delta=1.0, dim=2, r_k=1.0)
        with pytest.raises(ValueError):
            BetaSchedule(delta=0.1, dim=2, r_k=0.0)
        with pytest.raises(ValueError):
            BetaSchedule(delta=0.1, dim=2, r_k=1.0, scale=0.0)
        with pytest.raises(ValueError):
            beta(BetaSchedule(delta=0.1, dim=2, r_k=1.0), 0)


class TestConfidenceBounds:
    def test_zero_beta_collapses_to_mean(self):
        post = single_point_post()
        x = [0.4]
        mean, _ = post.mean_var_point(np.array(x))
        assert ucb(post, x, 0.0) == pytest.approx(mean)
        assert lcb(post, x, 0.0) == pytest.approx(mean)

    def test_far_query_approaches_asymptote(self):
        rng = np.random.default_rng(20)
        for _ in range(10):
            n, d = int(rng.integers(1, 10)), int(rng.integers(1, 4))
            kern = KernelSpec(
                "se", float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.3, 1.5)), d
            )
            data = Dataset(rng.normal(size=(n, d)), rng.normal(size=n), 0.01)
            post = GpPosterior(data, kern)
            beta_t = float(rng.uniform(1.0, 9.0))
            far = 10.0 * kernel_inverse_radius(kern, 1e-6 * kern.theta**2)
            x = data.points[0] + far
            limit = asymptotic_value(beta_t, kern.theta)
            assert abs(ucb(post, x, beta_t) - limit) <= 1e-3 * limit

    def test_single_point_worked_example(self):
        post = single_point_post()
        value = ucb(post, [0.0], 4.0)
        assert value == pytest.approx(1.0 / 1.01 + 2.0 * np.sqrt(1.0 - 1.0 / 1.01), abs=1e-9)
        assert value == pytest.approx(1.189106, abs=1e-6)

    def test_gap_is_twice_sigma_scaled(self):
        rng = np.random.default_rng(21)
        data = Dataset(rng.normal(size=(6, 2)), rng.normal(size=6), 0.05)
        post = GpPosterior(data, KernelSpec("se", 1.2, 0.8, 2))
        for _ in range(50):
            x = rng.normal(size=2) * 2
            beta_t = float(rng.uniform(0.0, 10.0))
            _, var = post.mean_var_point(x)
            gap = ucb(post, x, beta_t) - lcb(post, x, beta_t)
            assert gap == pytest.approx(2.0 * np.sqrt(beta_t) * np.sqrt(var), abs=1e-10)
            assert gap >= 0.0

    def test_invariant_under_row_permutation(self):
        rng = np.random.default_rng(22)
        X = rng.normal(size=(7, 2))
        y = rng.normal(size=7)
        kern = KernelSpec("matern52", 1.1, 0.9, 2)
        perm = rng.permutation(7)
        a = GpPosterior(Dataset(X, y, 0.01), kern)
        b = GpPosterior(Dataset(X[perm], y[perm], 0.01), kern)
        for _ in range(20):
            x = rng.normal(size=2)
            assert ucb(a, x, 3.0) == pytest.approx(ucb(b, x, 3.0), abs=1e-9)

    def test_monotone_in_beta(self):
        post = single_point_post()
        x = [0.7]
        betas = np.linspace(0.0, 9.0, 10)
        us = [ucb(post, x, b) for b in betas]
        ls = [lcb(post, x, b) for b in betas]
        assert all(b >= a for a, b in zip(us, us[1:]))
        assert all(b <= a for a, b in zip(ls, ls[1:]))

    def test_batch_matches_pointwise(self):
        rng = np.random.default_rng(23)
        data = Dataset(rng.normal(size=(5, 2)), rng.normal(size=5), 0.01)
        post = GpPosterior(data, KernelSpec("se", 1.0, 1.0, 2))
        X = rng.normal(size=(9, 2))
        ub = ucb_batch(post, X, 2.5)
        lb = lcb_batch(post, X, 2.5)
        for i, x in enumerate(X):
            assert ub[i] == pytest.approx(ucb(post, x, 2.5), abs=1e-12)
            assert lb[i] == pytest.approx(lcb(post, x, 2.5), abs=1e-12)

    def test_negative_beta_rejected(self):
        post = single_point_post()
        with pytest.raises(ValueError):
            ucb(post, [0.0], -1.0)
        with pytest.raises(ValueError):
            lcb(post, [0.0], -1.0)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(24)
        data = Dataset(rng.normal(size=(6, 2)), rng.normal(size=6), 0.05)
        post = GpPosterior(data, KernelSpec("se", 1.3, 0.7, 2))
        h = 1e-6
        for _ in range(10):
            x = rng.normal(size=2)
            value, grad = ucb_grad(post, x, 3.0)
            assert value == pytest.approx(ucb(post, x, 3.0), abs=1e-12)
            for j in range(2):
                e = np.zeros(2)
                e[j] = h
                fd = (ucb(post, x + e, 3.0) - ucb(post, x - e, 3.0)) / (2 * h)
                assert grad[j] == pytest.approx(fd, abs=1e-4)


class TestAsymptoticValue:
    def test_examples(self):
        assert asymptotic_value(4.0, 1.0) == 2.0
        assert asymptotic_value(0.0, 1.0) == 0.0
        assert asymptotic_value(2.82, 0.9) == pytest.approx(
            0.9 * np.sqrt(2.82), abs=1e-12
        )
        assert asymptotic_value(2.82, 0.9) == pytest.approx(1.51136, abs=1e-5)

    def test_validation(self):
        with pytest.raises(ValueError):
            asymptotic_value(-1.0, 1.0)
        with pytest.raises(ValueError):
            asymptotic_value(1.0, -1.0)
