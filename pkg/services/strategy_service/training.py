"""
One Monte Carlo gradient step of the strategy network through the surrogate
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from services.domain_service import sample_request, size_objective, size_objective_gradient
from services.scalarization_service import scalarize_with_weights
from services.surrogate_service import SurrogateModel, acquire
from shared.schemas import AcquisitionConfig, IdealPoint, Request, ScalarizerKind
from shared.utils.errors import InvalidArgumentError, NumericalFailureError
from .network import StratNetParams, adam_update, backward, forward_values


def scalarized_loss(
    params: StratNetParams,
    model: SurrogateModel,
    cfg: AcquisitionConfig,
    z: IdealPoint,
    lam: Request,
    scalarizer: Optional[ScalarizerKind] = None,
) -> Tuple[float, np.ndarray]:
    """ĝ(φθ(λ)) and its flat parameter gradient"""
    scalarizer = scalarizer or ScalarizerKind()
    x, tape = forward_values(params, lam)
    f1 = size_objective(x)
    f2_hat, grad_f2 = acquire(model, x, cfg)
    value, w1, w2 = scalarize_with_weights(scalarizer, f1, f2_hat, lam, z)
    upstream = w1 * size_objective_gradient(params.d) + w2 * grad_f2
    return value, backward(params, tape, upstream)


def training_step(
    params: StratNetParams,
    model: SurrogateModel,
    cfg: AcquisitionConfig,
    z: IdealPoint,
    K: int,
    rng: np.random.Generator,
    scalarizer: Optional[ScalarizerKind] = None,
    requests: Optional[Sequence[Request]] = None,
) -> Tuple[StratNetParams, float]:
    """
    Sample K requests (or use `requests`), sum their parameter gradients and
    apply one Adam update. Returns the new params and the mean loss.
    """
    if requests is None:
        if K < 1:
            raise InvalidArgumentError(f"K must be >= 1, got {K}")
        requests = [sample_request(rng) for _ in range(K)]
    elif len(requests) < 1:
        raise InvalidArgumentError("training_step needs at least one request")

    total = np.zeros(params.size)
    losses = []
    for lam in requests:
        value, grad = scalarized_loss(params, model, cfg, z, lam, scalarizer)
        if not (np.isfinite(value) and np.all(np.isfinite(grad))):
            raise NumericalFailureError(f"non-finite gradient for request lambda={lam.lam}")
        total += grad
        losses.append(value)

    return adam_update(params, total), float(np.mean(losses))
