import math

import numpy as np
import pytest

from services.evaluation_service import SyntheticObjective, get_fixture, pareto_oracle
from services.scalarization_service import (
    pbi,
    pbi_gradient,
    scalarize_with_weights,
    tch_gradient_weights,
    tchebycheff,
    weighted_sum,
)
from shared.schemas import IdealPoint, ObjectivePair, Request, ScalarizerKind

ORIGIN = IdealPoint(z=(0.0, 0.0))


def req(l1):
    return Request.from_lambda1(l1)


@pytest.mark.parametrize(
    "l1, f, expected",
    [
        (1.0, (0.3, 99.0), 0.3),
        (0.5, (0.2, 0.4), 0.3),
        (0.25, (0.8, 0.4), 0.5),
    ],
)
def test_weighted_sum(l1, f, expected):
    assert weighted_sum(f, req(l1)) == pytest.approx(expected)


def test_tchebycheff_examples():
    value, branch = tchebycheff(ObjectivePair(f1=0.2, f2=0.4), req(0.5), ORIGIN)
    assert value == pytest.approx(0.2)
    assert branch.active_index == 2 and not branch.tie

    value, branch = tchebycheff((0.4, 0.4), req(0.5), ORIGIN)
    assert value == pytest.approx(0.2)
    assert branch.active_index == 1 and branch.tie

    value, branch = tchebycheff((0.3, 5.0), req(1.0), ORIGIN)
    assert value == pytest.approx(0.3)
    assert branch.active_index == 1


def test_tchebycheff_clamps_below_ideal():
    value, _ = tchebycheff((0.5, 0.1), req(0.0), IdealPoint(z=(0.0, 0.2)))
    assert value == 0.0


def test_tchebycheff_permutation_symmetry(rng):
    for _ in range(200):
        f = rng.uniform(size=2)
        z = rng.uniform(-0.5, 0.0, size=2)
        l1 = rng.uniform()
        a, _ = tchebycheff((f[0], f[1]), req(l1), (z[0], z[1]))
        b, _ = tchebycheff((f[1], f[0]), req(1.0 - l1), (z[1], z[0]))
        assert a == pytest.approx(b, abs=1e-15)


def test_tchebycheff_nonnegative_and_zero_only_at_ideal():
    front = np.column_stack([np.linspace(0.0, 1.0, 21), 1.0 - np.linspace(0.0, 1.0, 21) ** 2])
    z = IdealPoint(z=(-1e-3, -1e-3))
    for l1 in np.linspace(0.0, 1.0, 101):
        for f in front:
            value, _ = tchebycheff((f[0], f[1]), req(l1), z)
            assert value >= 0.0
    assert tchebycheff((0.3, 0.6), req(0.4), (0.3, 0.6))[0] == 0.0


def test_gradient_weights_examples():
    assert tch_gradient_weights(0.1, 0.3, req(0.5), ORIGIN) == (0.0, 0.5)
    assert tch_gradient_weights(0.4, 0.4, req(0.5), ORIGIN) == (0.5, 0.0)
    assert tch_gradient_weights(0.9, 0.2, req(0.0), ORIGIN) == (0.0, 1.0)


def test_gradient_weights_agree_with_branch(rng):
    for _ in range(100000 // 10):
        f1, f2, l1 = rng.uniform(size=3)
        z = tuple(rng.uniform(-0.2, 0.2, size=2))
        _, branch = tchebycheff((f1, f2), req(l1), z)
        w1, w2 = tch_gradient_weights(f1, f2, req(l1), z)
        assert (w2 == 0.0) == (branch.active_index == 1)


# ============================================
# PBI
# ============================================
def test_pbi_examples():
    assert pbi((0.2, 0.7), req(0.3), (0.2, 0.7), 5.0) == 0.0

    d1 = abs(-0.3 * 0.5 - 0.3 * 0.5) / math.sqrt(0.5)
    d2 = math.hypot(0.3 + d1 * 0.5, 0.3 + d1 * 0.5)
    assert pbi((0.3, 0.3), req(0.5), ORIGIN, 0.1) == pytest.approx(d1 + 0.1 * d2, rel=1e-12)


def test_pbi_is_increasing_in_penalty(rng):
    for _ in range(50):
        f = tuple(rng.uniform(size=2))
        lam = req(rng.uniform(0.05, 0.95))
        assert pbi(f, lam, ORIGIN, 5.0) > pbi(f, lam, ORIGIN, 0.1)


def test_pbi_gradient_matches_finite_differences(rng):
    h = 1e-7
    for _ in range(50):
        f = rng.uniform(0.1, 0.9, size=2)
        lam = req(rng.uniform(0.05, 0.95))
        z = (-0.01, -0.01)
        w = pbi_gradient((f[0], f[1]), lam, z, 0.5)
        n1 = (pbi((f[0] + h, f[1]), lam, z, 0.5) - pbi((f[0] - h, f[1]), lam, z, 0.5)) / (2 * h)
        n2 = (pbi((f[0], f[1] + h), lam, z, 0.5) - pbi((f[0], f[1] - h), lam, z, 0.5)) / (2 * h)
        assert w == pytest.approx((n1, n2), rel=1e-5, abs=1e-6)


def test_scalarize_with_weights_dispatch():
    lam = req(0.3)
    assert scalarize_with_weights(ScalarizerKind.parse("ws"), 0.2, 0.5, lam, ORIGIN) == pytest.approx((0.41, 0.3, 0.7))
    value, w1, w2 = scalarize_with_weights(ScalarizerKind.parse("tch"), 0.2, 0.5, lam, ORIGIN)
    assert (value, w1, w2) == pytest.approx((0.35, 0.0, 0.7))
    value, _, _ = scalarize_with_weights(ScalarizerKind.parse("pbi:0.1"), 0.2, 0.5, lam, ORIGIN)
    assert value == pytest.approx(pbi((0.2, 0.5), lam, ORIGIN, 0.1))


# ============================================
# CONCAVE FRONT
# ============================================
def test_tchebycheff_traces_concave_front_weighted_sum_does_not():
    front = pareto_oracle(SyntheticObjective(get_fixture("concave")), 1001)
    f = np.array([p.as_tuple() for _, p in front])
    z = IdealPoint(z=(f[:, 0].min() - 1e-3, f[:, 1].min() - 1e-3))
    lambdas = np.linspace(0.0, 1.0, 101)

    tch_f1, ws_f1 = [], []
    for l1 in lambdas:
        lam = req(l1)
        tch = [tchebycheff((a, b), lam, z)[0] for a, b in f]
        ws = [weighted_sum((a, b), lam) for a, b in f]
        tch_f1.append(f[int(np.argmin(tch)), 0])
        ws_f1.append(f[int(np.argmin(ws)), 0])

    tch_f1 = np.array(tch_f1)
    assert np.all(np.diff(tch_f1) <= 1e-12)
    span = f[:, 0].max() - f[:, 0].min()
    assert tch_f1.max() - tch_f1.min() >= 0.9 * span

    extremes = {f[:, 0].min(), f[:, 0].max()}
    for l1, chosen in zip(lambdas[1:-1], ws_f1[1:-1]):
        assert chosen in extremes
