"""
Strategy network: request λ1 -> per-block sparsity ratios

A 1 -> H -> H -> d perceptron (tanh, tanh, sigmoid) with hand-written
forward and reverse passes and an Adam optimizer state.
"""
from dataclasses import dataclass, replace
from typing import Dict, List, Tuple

import numpy as np
from scipy.special import expit

from shared.schemas import Request, Strategy
from shared.storage import decode_array, encode_array
from shared.utils.errors import InvalidArgumentError

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

LAYER_NAMES = ("W1", "b1", "W2", "b2", "W3", "b3")


def layer_shapes(d: int, hidden: int) -> List[Tuple[int, ...]]:
    return [(hidden, 1), (hidden,), (hidden, hidden), (hidden,), (d, hidden), (d,)]


def parameter_count(d: int, hidden: int = 64) -> int:
    return sum(int(np.prod(shape)) for shape in layer_shapes(d, hidden))


@dataclass(frozen=True)
class StratNetParams:
    """Weights plus Adam state; updates return a new instance"""
    d: int
    hidden: int
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    W3: np.ndarray
    b3: np.ndarray
    m: np.ndarray
    v: np.ndarray
    step: int = 0
    lr: float = 1e-3
    seed: int = 0

    @property
    def layers(self) -> List[np.ndarray]:
        return [getattr(self, name) for name in LAYER_NAMES]

    @property
    def size(self) -> int:
        return parameter_count(self.d, self.hidden)

    def flatten(self) -> np.ndarray:
        return np.concatenate([layer.ravel() for layer in self.layers])

    def with_flat(self, flat: np.ndarray) -> "StratNetParams":
        flat = np.asarray(flat, dtype=np.float64)
        if flat.shape != (self.size,):
            raise InvalidArgumentError(f"expected {self.size} parameters, got shape {flat.shape}")
        arrays = unflatten(flat, self.d, self.hidden)
        return replace(self, **dict(zip(LAYER_NAMES, arrays)))

    def to_dict(self) -> Dict:
        return {
            "architecture": {"input": 1, "hidden": self.hidden, "output": self.d,
                             "activations": ["tanh", "tanh", "sigmoid"]},
            "weights": encode_array(self.flatten()),
            "adam_m": encode_array(self.m),
            "adam_v": encode_array(self.v),
            "step": self.step,
            "lr": self.lr,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "StratNetParams":
        arch = data["architecture"]
        d, hidden = int(arch["output"]), int(arch["hidden"])
        arrays = unflatten(decode_array(data["weights"]), d, hidden)
        return cls(
            d=d,
            hidden=hidden,
            **dict(zip(LAYER_NAMES, arrays)),
            m=decode_array(data["adam_m"]),
            v=decode_array(data["adam_v"]),
            step=int(data["step"]),
            lr=float(data["lr"]),
            seed=int(data["seed"]),
        )


def unflatten(flat: np.ndarray, d: int, hidden: int) -> List[np.ndarray]:
    arrays, offset = [], 0
    for shape in layer_shapes(d, hidden):
        n = int(np.prod(shape))
        arrays.append(flat[offset:offset + n].reshape(shape).copy())
        offset += n
    return arrays


def init_params(d: int, hidden: int = 64, lr: float = 1e-3, seed: int = 0) -> StratNetParams:
    """Glorot-uniform weights, zero biases"""
    if d < 1 or hidden < 1:
        raise InvalidArgumentError(f"invalid network size d={d}, hidden={hidden}")
    rng = np.random.default_rng(seed)
    arrays = []
    for shape in layer_shapes(d, hidden):
        if len(shape) == 1:
            arrays.append(np.zeros(shape))
        else:
            fan_out, fan_in = shape
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            arrays.append(rng.uniform(-limit, limit, size=shape))
    n = parameter_count(d, hidden)
    return StratNetParams(
        d=d, hidden=hidden, **dict(zip(LAYER_NAMES, arrays)),
        m=np.zeros(n), v=np.zeros(n), step=0, lr=lr, seed=seed,
    )


# ============================================
# FORWARD / BACKWARD
# ============================================
@dataclass(frozen=True)
class Tape:
    lambda1: float
    a1: np.ndarray
    a2: np.ndarray
    x: np.ndarray


def _lambda1(lam) -> float:
    return lam.lambda1 if isinstance(lam, Request) else float(lam)


def forward_values(params: StratNetParams, lam) -> Tuple[np.ndarray, Tape]:
    l1 = _lambda1(lam)
    a1 = np.tanh(params.W1[:, 0] * l1 + params.b1)
    a2 = np.tanh(params.W2 @ a1 + params.b2)
    x = expit(params.W3 @ a2 + params.b3)
    return x, Tape(lambda1=l1, a1=a1, a2=a2, x=x)


def forward(params: StratNetParams, lam: Request) -> Tuple[Strategy, Tape]:
    x, tape = forward_values(params, lam)
    return Strategy.from_array(x), tape


def forward_batch(params: StratNetParams, lambda1: np.ndarray) -> np.ndarray:
    """Strategies for many λ1 values at once, one row each"""
    l1 = np.asarray(lambda1, dtype=np.float64).reshape(-1, 1)
    a1 = np.tanh(l1 @ params.W1.T + params.b1)
    a2 = np.tanh(a1 @ params.W2.T + params.b2)
    return expit(a2 @ params.W3.T + params.b3)


def backward(params: StratNetParams, tape: Tape, upstream: np.ndarray) -> np.ndarray:
    """Flat ∇θ of upstreamᵀx, in `flatten` order"""
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != (params.d,):
        raise InvalidArgumentError(f"upstream gradient must have shape ({params.d},), got {upstream.shape}")

    dz3 = upstream * tape.x * (1.0 - tape.x)
    dW3 = np.outer(dz3, tape.a2)
    db3 = dz3
    dz2 = (params.W3.T @ dz3) * (1.0 - tape.a2 ** 2)
    dW2 = np.outer(dz2, tape.a1)
    db2 = dz2
    dz1 = (params.W2.T @ dz2) * (1.0 - tape.a1 ** 2)
    dW1 = (dz1 * tape.lambda1)[:, None]
    db1 = dz1
    return np.concatenate([g.ravel() for g in (dW1, db1, dW2, db2, dW3, db3)])


def adam_update(params: StratNetParams, grad: np.ndarray) -> StratNetParams:
    step = params.step + 1
    m = ADAM_BETA1 * params.m + (1.0 - ADAM_BETA1) * grad
    v = ADAM_BETA2 * params.v + (1.0 - ADAM_BETA2) * grad * grad
    m_hat = m / (1.0 - ADAM_BETA1 ** step)
    v_hat = v / (1.0 - ADAM_BETA2 ** step)
    flat = params.flatten() - params.lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
    return replace(params.with_flat(flat), m=m, v=v, step=step)
