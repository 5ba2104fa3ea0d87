import numpy as np
import pytest

from services.evaluation_service import (
    EvalLedger,
    SyntheticObjective,
    evaluate_true,
    get_fixture,
    grid_front,
    greedy_allocation_front,
    pareto_oracle,
)
from services.evaluation_service.objectives import BlackBoxObjective
from services.pareto_service import dominates
from shared.schemas import ObjectiveFamily, Strategy, SyntheticSpec
from shared.utils.errors import BudgetExceededError, EvaluatorFaultError, InvalidArgumentError


def power_sum(weights, exponents):
    return SyntheticObjective(SyntheticSpec(family=ObjectiveFamily.POWER_SUM, weights=weights, exponents=exponents))


class NanObjective(BlackBoxObjective):
    @property
    def dimension(self) -> int:
        return 2

    def evaluate(self, x):
        return float("nan")


# ============================================
# SYNTHETIC FAMILIES
# ============================================
def test_power_sum_examples():
    obj = power_sum((1.0, 1.0), (1.0, 2.0))
    ledger = EvalLedger()
    assert evaluate_true(obj, np.zeros(2), ledger) == 0.0
    assert evaluate_true(obj, np.ones(2), ledger) == pytest.approx(1.0)
    assert evaluate_true(obj, Strategy.from_array([0.5, 0.5]), ledger) == pytest.approx(0.375)


def test_coupled_is_normalized_and_monotone():
    obj = SyntheticObjective(SyntheticSpec.from_seed("Coupled", d=4, seed=7))
    assert obj.evaluate(np.zeros(4)) == 0.0
    assert obj.evaluate(np.ones(4)) == pytest.approx(1.0)

    rng = np.random.default_rng(3)
    x = rng.uniform(0.0, 0.8, size=(1000, 4))
    y = x + rng.uniform(0.0, 0.2, size=(1000, 4))
    assert np.all(obj.evaluate_batch(x) <= obj.evaluate_batch(y) + 1e-15)


def test_batch_matches_single_evaluation():
    obj = SyntheticObjective(SyntheticSpec.from_seed("Coupled", d=3, seed=1))
    xs = np.random.default_rng(0).uniform(size=(5, 3))
    assert obj.evaluate_batch(xs) == pytest.approx([obj.evaluate(x) for x in xs], abs=1e-15)


# ============================================
# LEDGER
# ============================================
def test_cache_coherence():
    obj = power_sum((1.0, 2.0), (1.5, 2.0))
    ledger = EvalLedger()
    x = np.array([0.3, 0.6])
    first = evaluate_true(obj, x, ledger)
    second = evaluate_true(obj, x + 1e-14, ledger)
    assert first == second
    assert ledger.true_evaluations == 1
    assert ledger.cache_hits == 1


def test_budget_is_enforced():
    obj = power_sum((1.0, 1.0), (1.0, 1.0))
    ledger = EvalLedger(budget=2)
    evaluate_true(obj, np.array([0.1, 0.1]), ledger)
    evaluate_true(obj, np.array([0.2, 0.2]), ledger)
    # cache hits stay free
    evaluate_true(obj, np.array([0.1, 0.1]), ledger)
    with pytest.raises(BudgetExceededError):
        evaluate_true(obj, np.array([0.3, 0.3]), ledger)
    assert ledger.true_evaluations == 2


def test_non_finite_output_is_an_evaluator_fault():
    with pytest.raises(EvaluatorFaultError) as err:
        evaluate_true(NanObjective(), np.array([0.1, 0.2]), EvalLedger())
    assert err.value.strategy == [0.1, 0.2]
    assert err.value.exit_code == 3


def test_strategy_dimension_is_checked_before_evaluating():
    obj = power_sum((1.0, 1.0), (1.0, 2.0))
    ledger = EvalLedger()
    with pytest.raises(InvalidArgumentError):
        evaluate_true(obj, np.array([0.1, 0.2, 0.3]), ledger)
    assert ledger.true_evaluations == 0


def test_ledger_accounts_cost_per_call():
    obj = power_sum((1.0, 1.0), (1.0, 2.0))
    obj.cost_per_call = 2.5
    ledger = EvalLedger()
    evaluate_true(obj, np.array([0.1, 0.2]), ledger)
    evaluate_true(obj, np.array([0.1, 0.2]), ledger)
    evaluate_true(obj, np.array([0.4, 0.2]), ledger)
    assert ledger.true_evaluations == 2
    assert ledger.cost == pytest.approx(5.0)
    assert EvalLedger.from_dict(ledger.to_dict()).cost == ledger.cost


# ============================================
# ORACLE
# ============================================
def test_linear_front_is_the_anti_diagonal():
    front = pareto_oracle(power_sum((1.0, 1.0), (1.0, 1.0)), 11)
    f = np.array([p.as_tuple() for _, p in front])
    assert np.allclose(f[:, 1], 1.0 - f[:, 0], atol=1e-12)
    assert len(f) == 21


def test_greedy_allocation_matches_grid_search():
    obj = power_sum((1.0, 2.0), (2.0, 1.5))
    greedy = np.array([p.as_tuple() for _, p in greedy_allocation_front(obj, 21)])

    levels = np.linspace(0.0, 1.0, 21)
    xs = np.array([(a, b) for a in levels for b in levels])
    f1 = [float(v) for v in np.round(1.0 - xs.mean(axis=1), 9)]
    f2 = obj.evaluate_batch(xs)
    best = {}
    for key, value in zip(f1, f2):
        best[key] = min(value, best.get(key, np.inf))

    assert len(greedy) == len(best)
    for g1, g2 in greedy:
        assert g2 == pytest.approx(best[float(np.round(g1, 9))], abs=1e-12)


def test_convex_front_shape():
    front = pareto_oracle(SyntheticObjective(get_fixture("convex")), 101)
    for strategy, pair in front:
        x = strategy.as_array()
        if x[0] == x[1]:
            assert pair.f2 == pytest.approx((1.0 - pair.f1) ** 2, abs=1e-12)
        assert pair.f2 >= (1.0 - pair.f1) ** 2 - 1e-12


def test_concave_fixture_front():
    front = pareto_oracle(SyntheticObjective(get_fixture("concave")), 101)
    f = np.array([p.as_tuple() for _, p in front])
    assert len(f) == 101
    assert np.allclose(f[:, 1], np.sqrt(1.0 - f[:, 0]), atol=1e-12)


def test_coupled_oracle_is_mutually_nondominated():
    obj = SyntheticObjective(SyntheticSpec.from_seed("Coupled", d=3, seed=7))
    front = [p.as_tuple() for _, p in pareto_oracle(obj, 51)]
    assert len(front) > 10
    for a in front:
        assert not any(dominates(b, a) for b in front)


def test_oracle_limits():
    with pytest.raises(InvalidArgumentError):
        pareto_oracle(power_sum((1.0,), (1.0,)), 1)
    coupled = SyntheticObjective(SyntheticSpec.from_seed("Coupled", d=12, seed=0))
    with pytest.raises(BudgetExceededError):
        pareto_oracle(coupled, 101)
