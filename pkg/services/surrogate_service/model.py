"""
Gaussian-process regression over strategies

Targets are standardized inside the model; every public output is in the
caller's units. The prior mean is zero in standardized space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.spatial.distance import cdist

from config.settings import settings
from shared.storage import decode_array, encode_array
from shared.utils.errors import NumericalFailureError
from .kernel import (
    KernelParams,
    input_gradient,
    kernel_matrix,
    lengthscale_derivative,
)

LOG_2PI = math.log(2.0 * math.pi)
# the ascent step is halved at most this many times before a restart stops
MAX_STEP_HALVINGS = 20


@dataclass(frozen=True)
class Posterior:
    mean: float
    std: float
    grad_mean: np.ndarray
    grad_std: np.ndarray


class SurrogateModel:
    """A fitted GP; treat as immutable once built"""

    def __init__(
        self,
        params: KernelParams,
        X: np.ndarray,
        y: np.ndarray,
        y_mean: float,
        y_std: float,
        chol: np.ndarray,
        alpha: np.ndarray,
        jitter: float,
        log_likelihood: float,
        ll_trace: Optional[List[float]] = None,
    ):
        self.params = params
        self.X = X
        self.y = y
        self.y_mean = y_mean
        self.y_std = y_std
        self.chol = chol
        self.alpha = alpha
        self.jitter = jitter
        self.log_likelihood = log_likelihood
        self.ll_trace = list(ll_trace or [])

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def to_dict(self) -> Dict:
        return {
            "params": self.params.model_dump(),
            "X": encode_array(self.X),
            "y": encode_array(self.y),
            "y_mean": self.y_mean,
            "y_std": self.y_std,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SurrogateModel":
        """Rebuild from stored data; the Cholesky factor is recomputed"""
        return _build(
            KernelParams(**data["params"]),
            decode_array(data["X"]),
            decode_array(data["y"]),
            float(data["y_mean"]),
            float(data["y_std"]),
        )


# ============================================
# FACTORIZATION
# ============================================
def _factorize(K: np.ndarray) -> Tuple[np.ndarray, float]:
    """Cholesky of K, escalating diagonal jitter on failure"""
    mean_diag = float(np.mean(np.diag(K)))
    for level in [0.0] + list(settings.GP_JITTER_LEVELS):
        try:
            jitter = level * mean_diag
            L = cholesky(K + jitter * np.eye(K.shape[0]), lower=True, check_finite=True)
            if np.all(np.isfinite(L)):
                if level > 0.0:
                    logger.debug(f"Cholesky succeeded with relative jitter {level:g}")
                return L, jitter
        except (LinAlgError, ValueError):
            continue
    raise NumericalFailureError(
        f"Cholesky failed after jitter escalation up to {settings.GP_JITTER_LEVELS[-1]:g}"
    )


def _covariance(X: np.ndarray, params: KernelParams) -> Tuple[np.ndarray, np.ndarray]:
    R = cdist(X, X)
    Kf = kernel_matrix(X, X, params)
    return R, Kf


def _log_likelihood(y: np.ndarray, L: np.ndarray, alpha: np.ndarray) -> float:
    n = y.shape[0]
    return float(-0.5 * y @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * n * LOG_2PI)


def _build(
    params: KernelParams,
    X: np.ndarray,
    y: np.ndarray,
    y_mean: float,
    y_std: float,
    ll_trace: Optional[List[float]] = None,
) -> SurrogateModel:
    _, Kf = _covariance(X, params)
    Ky = Kf + params.noise_variance * np.eye(X.shape[0])
    L, jitter = _factorize(Ky)
    alpha = cho_solve((L, True), y)
    return SurrogateModel(
        params=params,
        X=X,
        y=y,
        y_mean=y_mean,
        y_std=y_std,
        chol=L,
        alpha=alpha,
        jitter=jitter,
        log_likelihood=_log_likelihood(y, L, alpha),
        ll_trace=ll_trace,
    )


def standardize(y_raw: np.ndarray) -> Tuple[np.ndarray, float, float]:
    y_mean = float(np.mean(y_raw))
    y_std = float(np.std(y_raw))
    if not math.isfinite(y_std) or y_std < 1e-12:
        y_std = 1.0
    return (y_raw - y_mean) / y_std, y_mean, y_std


def _check_inputs(X: np.ndarray, y_raw: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y_raw = np.asarray(y_raw, dtype=np.float64).ravel()
    if X.shape[0] != y_raw.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y_raw.shape[0]} entries")
    if X.shape[0] < 2:
        raise ValueError("a GP fit needs at least 2 observations")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y_raw))):
        raise ValueError("GP training data must be finite")
    return X, y_raw


def condition(X: np.ndarray, y_raw: np.ndarray, params: KernelParams) -> SurrogateModel:
    """Posterior under fixed hyperparameters"""
    X, y_raw = _check_inputs(X, y_raw)
    y, y_mean, y_std = standardize(y_raw)
    return _build(params, X, y, y_mean, y_std)


# ============================================
# MARGINAL LIKELIHOOD
# ============================================
def log_marginal_likelihood(X: np.ndarray, y: np.ndarray, params: KernelParams) -> Tuple[float, np.ndarray]:
    """Log marginal likelihood of standardized `y` and its gradient in log-parameters"""
    R, Kf = _covariance(X, params)
    n = X.shape[0]
    L, _ = _factorize(Kf + params.noise_variance * np.eye(n))
    alpha = cho_solve((L, True), y)
    ll = _log_likelihood(y, L, alpha)

    K_inv = cho_solve((L, True), np.eye(n))
    W = np.outer(alpha, alpha) - K_inv
    grad = 0.5 * np.array([
        np.sum(W * lengthscale_derivative(R, params)),
        np.sum(W * Kf),
        params.noise_variance * np.trace(W),
    ])
    return ll, grad


def _ascend(X: np.ndarray, y: np.ndarray, start: KernelParams, steps: int, step_size: float):
    """Steps of `step_size` · ∇ in log-parameters, halved until the likelihood does not drop"""
    params = start
    ll, grad = log_marginal_likelihood(X, y, params)
    trace = [ll]
    for _ in range(steps):
        eta = step_size
        accepted = False
        for _ in range(MAX_STEP_HALVINGS):
            candidate = KernelParams.from_vector(params.as_vector() + eta * grad)
            try:
                cand_ll, cand_grad = log_marginal_likelihood(X, y, candidate)
            except NumericalFailureError:
                cand_ll = -np.inf
            if np.isfinite(cand_ll) and cand_ll >= ll:
                params, ll, grad = candidate, cand_ll, cand_grad
                accepted = True
                break
            eta *= 0.5
        trace.append(ll)
        if not accepted:
            break
    return params, ll, trace


def fit(
    X: np.ndarray,
    y_raw: np.ndarray,
    restarts: Optional[int] = None,
    seed: int = 0,
    steps: Optional[int] = None,
    step_size: Optional[float] = None,
) -> SurrogateModel:
    """
    Maximize the marginal likelihood from `restarts` initializations (the
    defaults first, then log-uniform draws) and return the best model.
    """
    X, y_raw = _check_inputs(X, y_raw)
    restarts = settings.GP_RESTARTS if restarts is None else max(1, restarts)
    steps = settings.GP_FIT_STEPS if steps is None else steps
    step_size = settings.GP_FIT_STEP_SIZE if step_size is None else step_size

    y, y_mean, y_std = standardize(y_raw)
    rng = np.random.default_rng(seed)

    starts = [KernelParams()]
    for _ in range(restarts - 1):
        starts.append(KernelParams(
            log_lengthscale=rng.uniform(math.log(1e-2), math.log(1e1)),
            log_signal_variance=rng.uniform(math.log(1e-1), math.log(1e1)),
            log_noise_variance=rng.uniform(math.log(1e-6), math.log(1e-1)),
        ))

    best = None
    for idx, start in enumerate(starts):
        try:
            params, ll, trace = _ascend(X, y, start, steps, step_size)
        except NumericalFailureError as e:
            logger.warning(f"GP restart {idx} failed: {e}")
            continue
        logger.debug(f"GP restart {idx}: loglik {trace[0]:.4f} -> {ll:.4f}, lengthscale {params.lengthscale:.4g}")
        if best is None or ll > best[1]:
            best = (params, ll, trace)

    if best is None:
        raise NumericalFailureError(f"every GP restart failed on n={X.shape[0]} observations")

    params, _, trace = best
    return _build(params, X, y, y_mean, y_std, ll_trace=trace)


# ============================================
# PREDICTION
# ============================================
def predict(model: SurrogateModel, x) -> Posterior:
    x = np.asarray(x, dtype=np.float64)
    params = model.params
    floor = settings.GP_SIGMA_FLOOR

    kstar = kernel_matrix(x[None, :], model.X, params)[0]
    J = input_gradient(x, model.X, params)

    mean_s = float(kstar @ model.alpha)
    v = solve_triangular(model.chol, kstar, lower=True)
    var_s = params.signal_variance - float(v @ v)
    std_s = math.sqrt(max(var_s, floor * floor))

    grad_mean_s = J.T @ model.alpha
    grad_std_s = -(J.T @ cho_solve((model.chol, True), kstar)) / std_s

    return Posterior(
        mean=model.y_mean + model.y_std * mean_s,
        std=max(model.y_std * std_s, floor),
        grad_mean=model.y_std * grad_mean_s,
        grad_std=model.y_std * grad_std_s,
    )


def predict_batch(model: SurrogateModel, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Posterior means and standard deviations for many inputs"""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    floor = settings.GP_SIGMA_FLOOR
    Ks = kernel_matrix(X, model.X, model.params)
    mean = model.y_mean + model.y_std * (Ks @ model.alpha)
    V = solve_triangular(model.chol, Ks.T, lower=True)
    var_s = model.params.signal_variance - np.sum(V * V, axis=0)
    std = np.maximum(model.y_std * np.sqrt(np.maximum(var_s, floor * floor)), floor)
    return mean, std


def standardized_variance(model: SurrogateModel, X: np.ndarray) -> np.ndarray:
    """Latent posterior variance in standardized units, unfloored"""
    Ks = kernel_matrix(np.atleast_2d(X), model.X, model.params)
    V = solve_triangular(model.chol, Ks.T, lower=True)
    return model.params.signal_variance - np.sum(V * V, axis=0)
