"""
Named synthetic objectives used by tests, the compare command and examples
"""
from typing import Callable, Dict

from shared.schemas import ObjectiveFamily, SyntheticSpec


def concave_spec() -> SyntheticSpec:
    """One block, f2 = sqrt(x): front f2 = sqrt(1 - f1), concave"""
    return SyntheticSpec(family=ObjectiveFamily.POWER_SUM, weights=(1.0,), exponents=(0.5,), seed=0)


def convex_spec() -> SyntheticSpec:
    """Two equal blocks, f2 = mean(x^2): front f2 = (1 - f1)^2"""
    return SyntheticSpec(family=ObjectiveFamily.POWER_SUM, weights=(1.0, 1.0), exponents=(2.0, 2.0), seed=0)


def desk_spec() -> SyntheticSpec:
    return SyntheticSpec.from_seed(ObjectiveFamily.POWER_SUM, d=12, seed=3)


FIXTURES: Dict[str, Callable[[], SyntheticSpec]] = {
    "concave": concave_spec,
    "convex": convex_spec,
    "desk": desk_spec,
}


def get_fixture(name: str) -> SyntheticSpec:
    key = name.strip().lower()
    if key not in FIXTURES:
        raise ValueError(f"Unknown fixture '{name}'. Allowed: {list(FIXTURES.keys())}")
    return FIXTURES[key]()
