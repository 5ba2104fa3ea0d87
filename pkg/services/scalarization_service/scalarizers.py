"""
Scalarization of (f1, f2) under a trade-off request

Each scalarizer also exposes its partial derivatives (w1, w2) with respect to
(f1, f2); the strategy network combines them with the objective gradients.
"""
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from shared.schemas import IdealPoint, ObjectivePair, Request, ScalarizerKind, ScalarizerName

TIE_TOLERANCE = 1e-12

PairLike = Union[ObjectivePair, Tuple[float, float]]
IdealLike = Union[IdealPoint, Tuple[float, float], np.ndarray]


@dataclass(frozen=True)
class BranchSelection:
    active_index: int
    tie: bool


def _pair(f: PairLike) -> Tuple[float, float]:
    if isinstance(f, ObjectivePair):
        return f.f1, f.f2
    return float(f[0]), float(f[1])


def _ideal(z: IdealLike) -> Tuple[float, float]:
    if isinstance(z, IdealPoint):
        return z.z
    return float(z[0]), float(z[1])


# ============================================
# WEIGHTED SUM
# ============================================
def weighted_sum(f: PairLike, lam: Request) -> float:
    f1, f2 = _pair(f)
    return lam.lambda1 * f1 + lam.lambda2 * f2


# ============================================
# TCHEBYCHEFF
# ============================================
def _tch_terms(f1: float, f2: float, lam: Request, z: IdealLike) -> Tuple[float, float]:
    z1, z2 = _ideal(z)
    # the running-minimum ideal point can sit above a surrogate f2
    return lam.lambda1 * max(f1 - z1, 0.0), lam.lambda2 * max(f2 - z2, 0.0)


def tchebycheff(f: PairLike, lam: Request, z: IdealLike) -> Tuple[float, BranchSelection]:
    """max(λ1(f1 - z1), λ2(f2 - z2)); branch 1 wins ties"""
    t1, t2 = _tch_terms(*_pair(f), lam, z)
    tie = abs(t1 - t2) <= TIE_TOLERANCE
    if tie or t1 > t2:
        return t1, BranchSelection(active_index=1, tie=tie)
    return t2, BranchSelection(active_index=2, tie=False)


def tch_gradient_weights(f1: float, f2_hat: float, lam: Request, z: IdealLike) -> Tuple[float, float]:
    _, branch = tchebycheff((f1, f2_hat), lam, z)
    if branch.active_index == 1:
        return lam.lambda1, 0.0
    return 0.0, lam.lambda2


# ============================================
# PENALTY-BASED BOUNDARY INTERSECTION
# ============================================
def _pbi_parts(f: PairLike, lam: Request, z: IdealLike):
    fv = np.asarray(_pair(f), dtype=np.float64)
    zv = np.asarray(_ideal(z), dtype=np.float64)
    lv = lam.as_array()
    norm = float(np.linalg.norm(lv))
    s = float((zv - fv) @ lv)
    d1 = abs(s) / norm
    v = fv - (zv - d1 * lv)
    return fv, zv, lv, norm, s, d1, v


def pbi(f: PairLike, lam: Request, z: IdealLike, xi: float) -> float:
    """d1 + ξ·d2 with d1 = |(z - f)ᵀλ| / ‖λ‖ and d2 = ‖f - (z - d1·λ)‖"""
    *_, d1, v = _pbi_parts(f, lam, z)
    return d1 + xi * float(np.linalg.norm(v))


def pbi_gradient(f: PairLike, lam: Request, z: IdealLike, xi: float) -> Tuple[float, float]:
    _, _, lv, norm, s, _, v = _pbi_parts(f, lam, z)
    dd1 = -math.copysign(1.0, s) * lv / norm if s != 0.0 else np.zeros(2)
    d2 = float(np.linalg.norm(v))
    if d2 > 0.0:
        dd2 = v / d2 + (float(lv @ v) / d2) * dd1
    else:
        dd2 = np.zeros(2)
    grad = dd1 + xi * dd2
    return float(grad[0]), float(grad[1])


# ============================================
# DISPATCH
# ============================================
def scalarize(kind: ScalarizerKind, f: PairLike, lam: Request, z: IdealLike) -> float:
    if kind.kind == ScalarizerName.WEIGHTED_SUM:
        return weighted_sum(f, lam)
    if kind.kind == ScalarizerName.TCHEBYCHEFF:
        return tchebycheff(f, lam, z)[0]
    return pbi(f, lam, z, kind.xi)


def scalarize_with_weights(
    kind: ScalarizerKind, f1: float, f2: float, lam: Request, z: IdealLike
) -> Tuple[float, float, float]:
    """(value, ∂g/∂f1, ∂g/∂f2)"""
    if kind.kind == ScalarizerName.WEIGHTED_SUM:
        return weighted_sum((f1, f2), lam), lam.lambda1, lam.lambda2
    if kind.kind == ScalarizerName.TCHEBYCHEFF:
        value, _ = tchebycheff((f1, f2), lam, z)
        w1, w2 = tch_gradient_weights(f1, f2, lam, z)
        return value, w1, w2
    w1, w2 = pbi_gradient((f1, f2), lam, z, kind.xi)
    return pbi((f1, f2), lam, z, kind.xi), w1, w2
