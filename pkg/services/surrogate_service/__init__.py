from .kernel import KernelParams, kernel, kernel_matrix
from .model import (
    Posterior,
    SurrogateModel,
    condition,
    fit,
    log_marginal_likelihood,
    predict,
    predict_batch,
    standardized_variance,
)
from .acquisition import acquire, acquire_batch

__all__ = [
    "KernelParams",
    "kernel",
    "kernel_matrix",
    "Posterior",
    "SurrogateModel",
    "condition",
    "fit",
    "log_marginal_likelihood",
    "predict",
    "predict_batch",
    "standardized_variance",
    "acquire",
    "acquire_batch",
]
