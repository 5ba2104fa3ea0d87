"""
Confidence-bound acquisition over the GP posterior

The acquisition value is the f̂2 used downstream; its gradient is what
flows into the strategy network.
"""
from typing import Tuple

import numpy as np

from shared.schemas import AcquisitionConfig, AcquisitionKind
from .model import SurrogateModel, predict, predict_batch


def _signed_kappa(cfg: AcquisitionConfig) -> float:
    kappa = cfg.effective_kappa
    if cfg.kind == AcquisitionKind.OPTIMISTIC:
        return -kappa
    return kappa


def acquire(model: SurrogateModel, x, cfg: AcquisitionConfig) -> Tuple[float, np.ndarray]:
    """pessimistic: μ̂ + κσ̂, optimistic: μ̂ - κσ̂, mean_only: μ̂"""
    post = predict(model, x)
    kappa = _signed_kappa(cfg)
    if kappa == 0.0:
        return post.mean, post.grad_mean
    return post.mean + kappa * post.std, post.grad_mean + kappa * post.grad_std


def acquire_batch(model: SurrogateModel, X: np.ndarray, cfg: AcquisitionConfig) -> np.ndarray:
    mean, std = predict_batch(model, X)
    kappa = _signed_kappa(cfg)
    if kappa == 0.0:
        return mean
    return mean + kappa * std
