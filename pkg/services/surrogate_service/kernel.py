"""
Isotropic Matérn 5/2 kernel with log-space hyperparameters
"""
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.spatial.distance import cdist

SQRT5 = math.sqrt(5.0)

LOG_LENGTHSCALE_BOUNDS = (math.log(1e-3), math.log(1e3))
LOG_SIGNAL_BOUNDS = (math.log(1e-6), math.log(1e6))
LOG_NOISE_BOUNDS = (math.log(1e-8), math.log(10.0))


def _clamp(value: float, bounds) -> float:
    return min(max(value, bounds[0]), bounds[1])


class KernelParams(BaseModel):
    """Kernel hyperparameters; values outside the allowed box are clamped on construction"""
    model_config = ConfigDict(frozen=True)

    log_lengthscale: float = 0.0
    log_signal_variance: float = 0.0
    log_noise_variance: float = math.log(1e-4)

    @model_validator(mode="before")
    @classmethod
    def _clamp_all(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        for name, bounds in (
            ("log_lengthscale", LOG_LENGTHSCALE_BOUNDS),
            ("log_signal_variance", LOG_SIGNAL_BOUNDS),
            ("log_noise_variance", LOG_NOISE_BOUNDS),
        ):
            if name in data:
                value = float(data[name])
                if not math.isfinite(value):
                    raise ValueError(f"{name} must be finite")
                data[name] = _clamp(value, bounds)
        return data

    @property
    def lengthscale(self) -> float:
        return math.exp(self.log_lengthscale)

    @property
    def signal_variance(self) -> float:
        return math.exp(self.log_signal_variance)

    @property
    def noise_variance(self) -> float:
        return math.exp(self.log_noise_variance)

    def as_vector(self) -> np.ndarray:
        return np.array([self.log_lengthscale, self.log_signal_variance, self.log_noise_variance])

    @classmethod
    def from_vector(cls, theta) -> "KernelParams":
        return cls(
            log_lengthscale=float(theta[0]),
            log_signal_variance=float(theta[1]),
            log_noise_variance=float(theta[2]),
        )


def matern52_from_distance(r: np.ndarray, params: KernelParams) -> np.ndarray:
    u = SQRT5 * np.asarray(r, dtype=np.float64) / params.lengthscale
    return params.signal_variance * (1.0 + u + u * u / 3.0) * np.exp(-u)


def kernel(x, y, params: KernelParams) -> float:
    """k(x, y) = σ²(1 + √5 r/ℓ + 5r²/(3ℓ²)) exp(-√5 r/ℓ), r = ‖x - y‖"""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"kernel inputs differ in shape: {x.shape} vs {y.shape}")
    r = float(np.sqrt(np.sum((x - y) ** 2)))
    return float(matern52_from_distance(r, params))


def kernel_matrix(A: np.ndarray, B: np.ndarray, params: KernelParams) -> np.ndarray:
    return matern52_from_distance(cdist(np.atleast_2d(A), np.atleast_2d(B)), params)


def lengthscale_derivative(r: np.ndarray, params: KernelParams) -> np.ndarray:
    """∂k/∂log ℓ = σ² u²(1 + u)/3 · exp(-u)"""
    u = SQRT5 * r / params.lengthscale
    return params.signal_variance * u * u * (1.0 + u) / 3.0 * np.exp(-u)


def input_gradient(x: np.ndarray, X: np.ndarray, params: KernelParams) -> np.ndarray:
    """Rows are ∂k(x, X_i)/∂x = -σ²·5/(3ℓ²)·(1 + u)·exp(-u)·(x - X_i)"""
    diff = np.asarray(x, dtype=np.float64)[None, :] - X
    r = np.sqrt(np.sum(diff * diff, axis=1))
    ell = params.lengthscale
    u = SQRT5 * r / ell
    scale = -params.signal_variance * (5.0 / (3.0 * ell * ell)) * (1.0 + u) * np.exp(-u)
    return scale[:, None] * diff
