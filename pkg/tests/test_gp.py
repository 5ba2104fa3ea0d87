import math

import numpy as np
import pytest

from services.surrogate_service import (
    KernelParams,
    acquire,
    condition,
    fit,
    kernel,
    kernel_matrix,
    log_marginal_likelihood,
    predict,
    predict_batch,
    standardized_variance,
)
from shared.schemas import AcquisitionConfig, AcquisitionKind


def rel_err(a, b, floor=1e-3):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), floor))


def central_diff(fn, x, h=1e-5):
    grad = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (fn(x + e) - fn(x - e)) / (2.0 * h)
    return grad


# ============================================
# KERNEL
# ============================================
def test_kernel_values():
    params = KernelParams(log_signal_variance=math.log(2.5))
    x = np.array([0.1, 0.4, 0.9])
    assert kernel(x, x, params) == pytest.approx(2.5, abs=1e-15)

    unit = KernelParams()
    s5 = math.sqrt(5.0)
    expected = (1.0 + s5 + 5.0 / 3.0) * math.exp(-s5)
    assert kernel(np.zeros(2), np.array([1.0, 0.0]), unit) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.52399, abs=1e-5)


def test_kernel_is_symmetric_and_bounded(rng):
    params = KernelParams(log_lengthscale=math.log(0.3))
    for _ in range(20):
        x, y = rng.uniform(size=4), rng.uniform(size=4)
        assert kernel(x, y, params) == kernel(y, x, params)
        assert 0.0 < kernel(x, y, params) <= params.signal_variance


def test_params_are_clamped():
    params = KernelParams(log_lengthscale=20.0, log_noise_variance=-50.0)
    assert params.lengthscale == pytest.approx(1e3)
    assert params.noise_variance == pytest.approx(1e-8)


# ============================================
# FITTING
# ============================================
def test_duplicate_inputs_fit_via_jitter():
    X = np.array([[0.3, 0.6], [0.3, 0.6]])
    model = fit(X, np.array([0.42, 0.42]), seed=0)
    assert predict(model, X[0]).mean == pytest.approx(0.42, abs=1e-6)


def test_fit_recovers_smooth_function():
    rng = np.random.default_rng(5)
    X = rng.uniform(size=(20, 4))
    y = X.mean(axis=1)
    model = fit(X, y, seed=1)

    held_out = rng.uniform(0.3, 0.7, size=(50, 4))
    mean, _ = predict_batch(model, held_out)
    assert np.max(np.abs(mean - held_out.mean(axis=1))) < 1e-2


def test_likelihood_ascent_is_monotone_and_beats_defaults():
    rng = np.random.default_rng(9)
    X = rng.uniform(size=(15, 3))
    y = np.cos(2.0 * X[:, 0]) + X[:, 1]
    model = fit(X, y, seed=2)

    trace = np.asarray(model.ll_trace)
    assert len(trace) >= 2
    assert np.all(np.diff(trace) >= 0.0)

    default_ll, _ = log_marginal_likelihood(X, model.y, KernelParams())
    assert model.log_likelihood >= default_ll - 1e-9


def test_ascent_step_is_fixed_size_in_log_parameters(monkeypatch):
    from services.surrogate_service import model as model_module

    start = KernelParams()
    target = start.as_vector() + np.array([0.5, -0.3, 0.2])

    def concave(X, y, params):
        v = params.as_vector()
        return -float(np.sum((v - target) ** 2)), -2.0 * (v - target)

    monkeypatch.setattr(model_module, "log_marginal_likelihood", concave)
    X = np.random.default_rng(0).uniform(size=(50, 2))
    params, _, trace = model_module._ascend(X, np.zeros(50), start, steps=1, step_size=0.05)

    _, grad = concave(X, None, start)
    assert params.as_vector() == pytest.approx(start.as_vector() + 0.05 * grad, abs=1e-12)
    assert trace[1] > trace[0]


def test_likelihood_gradient_matches_finite_differences():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(10, 2))
    y = np.sin(4.0 * X[:, 0]) * X[:, 1]
    y = (y - y.mean()) / y.std()
    theta = np.array([math.log(0.5), math.log(1.3), math.log(1e-3)])

    _, grad = log_marginal_likelihood(X, y, KernelParams.from_vector(theta))
    numeric = central_diff(lambda t: log_marginal_likelihood(X, y, KernelParams.from_vector(t))[0], theta)
    assert rel_err(grad, numeric) < 1e-5


def test_fit_is_deterministic():
    rng = np.random.default_rng(4)
    X = rng.uniform(size=(12, 3))
    y = X.sum(axis=1) ** 2
    a = fit(X, y, seed=3)
    b = fit(X, y, seed=3)
    assert a.params == b.params
    assert np.array_equal(a.alpha, b.alpha)


def test_cholesky_reconstructs_covariance(small_gp):
    K = kernel_matrix(small_gp.X, small_gp.X, small_gp.params)
    K += (small_gp.params.noise_variance + small_gp.jitter) * np.eye(small_gp.n)
    L = small_gp.chol
    assert np.linalg.norm(L @ L.T - K) / np.linalg.norm(K) < 1e-8


def test_constant_targets_use_unit_scale():
    X = np.random.default_rng(0).uniform(size=(5, 2))
    model = fit(X, np.full(5, 3.0), seed=0)
    assert model.y_std == 1.0
    assert predict(model, np.array([0.5, 0.5])).mean == pytest.approx(3.0, abs=1e-9)


# ============================================
# PREDICTION
# ============================================
def test_near_interpolation_at_training_inputs():
    rng = np.random.default_rng(11)
    X = rng.uniform(size=(10, 3))
    y = np.exp(X[:, 0]) - X[:, 2]
    params = KernelParams(log_lengthscale=math.log(0.5), log_noise_variance=math.log(1e-8))
    model = condition(X, y, params)
    for xi, yi in zip(X, y):
        assert predict(model, xi).mean == pytest.approx(yi, abs=1e-4)


def test_mean_gradient_matches_finite_differences(small_gp, rng):
    for _ in range(100):
        x = rng.uniform(size=3)
        post = predict(small_gp, x)
        numeric = central_diff(lambda v: predict(small_gp, v).mean, x)
        assert rel_err(post.grad_mean, numeric) < 1e-4


def test_std_gradient_matches_finite_differences(small_gp, rng):
    checked = 0
    for _ in range(100):
        x = rng.uniform(size=3)
        post = predict(small_gp, x)
        if post.std <= 1e-3:
            continue
        numeric = central_diff(lambda v: predict(small_gp, v).std, x)
        assert rel_err(post.grad_std, numeric) < 1e-3
        checked += 1
    assert checked > 50


def test_batch_prediction_matches_pointwise(small_gp, rng):
    X = rng.uniform(size=(7, 3))
    mean, std = predict_batch(small_gp, X)
    for i, x in enumerate(X):
        post = predict(small_gp, x)
        assert mean[i] == pytest.approx(post.mean, abs=1e-12)
        assert std[i] == pytest.approx(post.std, abs=1e-12)


def test_posterior_variance_is_bounded(small_gp, rng):
    var = standardized_variance(small_gp, rng.uniform(size=(1000, 3)))
    p = small_gp.params
    assert np.all(var >= -1e-12)
    assert np.all(var <= p.signal_variance + p.noise_variance)


def test_more_data_never_increases_variance(fixed_params, rng):
    for _ in range(10):
        X = rng.uniform(size=(8, 2))
        extra = np.vstack([X, rng.uniform(size=(1, 2))])
        test_points = rng.uniform(size=(50, 2))
        before = standardized_variance(condition(X, np.zeros(8), fixed_params), test_points)
        after = standardized_variance(condition(extra, np.zeros(9), fixed_params), test_points)
        assert np.all(after <= before + 1e-9)


# ============================================
# ACQUISITION
# ============================================
def test_acquisition_forms(small_gp, rng):
    x = rng.uniform(size=3)
    post = predict(small_gp, x)

    for kind in AcquisitionKind:
        value, grad = acquire(small_gp, x, AcquisitionConfig(kind=kind, kappa=0.0))
        assert value == post.mean
        assert np.array_equal(grad, post.grad_mean)

    mean_only, _ = acquire(small_gp, x, AcquisitionConfig(kind=AcquisitionKind.MEAN_ONLY, kappa=2.0))
    assert mean_only == post.mean

    pessimistic, _ = acquire(small_gp, x, AcquisitionConfig(kind=AcquisitionKind.PESSIMISTIC, kappa=0.5))
    optimistic, _ = acquire(small_gp, x, AcquisitionConfig(kind=AcquisitionKind.OPTIMISTIC, kappa=0.5))
    assert pessimistic - optimistic == pytest.approx(2 * 0.5 * post.std, abs=1e-12)


def test_pessimistic_bound_is_nondecreasing_in_kappa(small_gp, rng):
    x = rng.uniform(size=3)
    values = [acquire(small_gp, x, AcquisitionConfig(kappa=k))[0] for k in (0.0, 0.1, 0.5, 1.0, 2.0)]
    assert values == sorted(values)


@pytest.mark.parametrize("kind", [AcquisitionKind.PESSIMISTIC, AcquisitionKind.OPTIMISTIC])
def test_acquisition_gradient_matches_finite_differences(small_gp, kind):
    cfg = AcquisitionConfig(kind=kind, kappa=0.5)
    rng = np.random.default_rng(21)
    checked = 0
    for _ in range(100):
        x = rng.uniform(size=3)
        if predict(small_gp, x).std <= 1e-3:
            continue
        _, grad = acquire(small_gp, x, cfg)
        numeric = central_diff(lambda v: acquire(small_gp, v, cfg)[0], x)
        assert rel_err(grad, numeric) < 1e-3
        checked += 1
    assert checked > 50
