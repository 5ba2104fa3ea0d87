from .objectives import BlackBoxObjective, SyntheticObjective
from .ledger import EvalLedger, evaluate_true, evaluate_many
from .oracle import pareto_oracle, greedy_allocation_front, grid_front
from .fixtures import concave_spec, convex_spec, desk_spec, get_fixture

__all__ = [
    "BlackBoxObjective",
    "SyntheticObjective",
    "EvalLedger",
    "evaluate_true",
    "evaluate_many",
    "pareto_oracle",
    "greedy_allocation_front",
    "grid_front",
    "concave_spec",
    "convex_spec",
    "desk_spec",
    "get_fixture",
]
