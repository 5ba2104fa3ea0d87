import itertools
import math

import numpy as np
import pytest

from services.pareto_service import (
    FrontSet,
    ObjectiveNormalizer,
    dominates,
    hvi,
    hypervolume,
    hypervolume_of,
    marginal_hvi,
    nondominated,
    select_batch,
    select_batch_indices,
)
from shared.schemas import Strategy


def monte_carlo_hv(points, reference, n=1_000_000, seed=0):
    rng = np.random.default_rng(seed)
    samples = rng.uniform(0.0, 1.0, size=(n, 2)) * np.asarray(reference)
    pts = np.asarray(points)
    covered = np.zeros(n, dtype=bool)
    for p in pts:
        covered |= (samples[:, 0] >= p[0]) & (samples[:, 1] >= p[1])
    return covered.mean() * reference[0] * reference[1]


# ============================================
# HYPERVOLUME
# ============================================
def test_hypervolume_examples():
    assert hypervolume(FrontSet(points=(), reference=(1.0, 1.0))) == 0.0
    assert hypervolume(FrontSet(points=((1.0, 2.0), (2.0, 1.0)), reference=(3.0, 3.0))) == pytest.approx(3.0)
    assert hypervolume(FrontSet(points=((0.0, 0.0),), reference=(1.0, 1.0))) == pytest.approx(1.0)


def test_points_outside_reference_add_nothing():
    fs = FrontSet(points=((0.5, 0.5), (1.2, 0.1), (0.1, 1.0)), reference=(1.0, 1.0))
    assert hypervolume(fs) == pytest.approx(0.25)


def test_hypervolume_matches_monte_carlo():
    rng = np.random.default_rng(8)
    for _ in range(5):
        pts = rng.uniform(size=(12, 2))
        exact = hypervolume_of(pts, (1.0, 1.0))
        assert exact == pytest.approx(monte_carlo_hv(pts, (1.0, 1.0)), abs=3e-3)


def test_hypervolume_monotone_and_translation_invariant(rng):
    for _ in range(50):
        pts = rng.uniform(size=(10, 2))
        ref = (1.1, 1.1)
        base = hypervolume_of(pts, ref)
        assert hypervolume_of(np.vstack([pts, rng.uniform(size=(1, 2))]), ref) >= base
        shift = rng.normal(size=2)
        assert hypervolume_of(pts + shift, np.asarray(ref) + shift) == pytest.approx(base, abs=1e-12)


def test_hvi_examples():
    existing = FrontSet(points=((0.2, 0.2),), reference=(1.0, 1.0))
    assert hvi(existing, [(0.5, 0.5)]) == 0.0
    assert hvi(FrontSet(points=(), reference=(1.0, 1.0)), [(0.0, 0.0)]) == pytest.approx(1.0)


def test_hvi_matches_monte_carlo():
    rng = np.random.default_rng(12)
    existing = [tuple(p) for p in rng.uniform(size=(20, 2))]
    candidates = [tuple(p) for p in rng.uniform(size=(5, 2))]
    fs = FrontSet(points=existing, reference=(1.0, 1.0))
    mc = monte_carlo_hv(existing + candidates, (1.0, 1.0)) - monte_carlo_hv(existing, (1.0, 1.0))
    assert hvi(fs, candidates) == pytest.approx(mc, abs=3e-3)


def test_hvi_is_zero_exactly_for_dominated_candidates(rng):
    for _ in range(100):
        pts = rng.uniform(size=(8, 2))
        c = tuple(rng.uniform(size=2))
        fs = FrontSet(points=[tuple(p) for p in pts], reference=(1.0, 1.0))
        dominated = any(dominates(tuple(p), c) or tuple(p) == c for p in pts)
        assert (hvi(fs, [c]) == 0.0) == dominated


def test_marginal_hvi_agrees_with_hvi(rng):
    pts = rng.uniform(size=(15, 2))
    cands = rng.uniform(-0.1, 1.2, size=(40, 2))
    fs = FrontSet(points=[tuple(p) for p in pts], reference=(1.1, 1.1))
    scores = marginal_hvi(pts, (1.1, 1.1), cands)
    for c, s in zip(cands, scores):
        assert s == pytest.approx(hvi(fs, [tuple(c)]), abs=1e-12)


# ============================================
# NONDOMINATED FILTERING
# ============================================
def test_nondominated_examples():
    assert nondominated([(1, 1), (2, 2)]) == [(1.0, 1.0)]
    assert nondominated([(2, 1), (1, 2)]) == [(1.0, 2.0), (2.0, 1.0)]


def test_nondominated_against_quadratic_scan():
    pts = np.random.default_rng(1).uniform(size=(1000, 2))
    kept = np.array(nondominated(pts))
    le = (kept[:, None, :] <= pts[None, :, :]).all(axis=2)
    lt = (kept[:, None, :] < pts[None, :, :]).any(axis=2)
    dominated_by_kept = (le & lt).any(axis=0)

    for p in kept:
        assert not ((pts <= p).all(axis=1) & (pts < p).any(axis=1)).any()
    kept_set = {tuple(p) for p in kept}
    for i, p in enumerate(pts):
        if tuple(p) not in kept_set:
            assert dominated_by_kept[i]


# ============================================
# BATCH SELECTION
# ============================================
def joint_hvi(existing, pool, subset, ref):
    chosen = pool[list(subset)]
    return hypervolume_of(np.vstack([existing, chosen]), ref) - hypervolume_of(existing, ref)


def test_select_batch_single_element():
    s = Strategy.from_array([0.4])
    picked = select_batch(FrontSet(points=(), reference=(1.0, 1.0)), [(s, (0.3, 0.3))], 1)
    assert picked == [s]


def test_select_batch_small_example():
    pool = np.array([(0.1, 0.9), (0.9, 0.1), (0.5, 0.5)])
    picks = select_batch_indices(np.empty((0, 2)), (1.0, 1.0), pool, 2)
    assert picks[0] == 2
    best = max(joint_hvi(np.empty((0, 2)), pool, s, (1.0, 1.0)) for s in itertools.combinations(range(3), 2))
    assert joint_hvi(np.empty((0, 2)), pool, picks, (1.0, 1.0)) == pytest.approx(best)


def test_greedy_within_submodular_bound():
    rng = np.random.default_rng(31)
    bound = 1.0 - 1.0 / math.e
    for _ in range(100):
        n_pool = int(rng.integers(2, 13))
        batch = int(rng.integers(1, min(4, n_pool) + 1))
        existing = rng.uniform(size=(int(rng.integers(0, 6)), 2))
        pool = rng.uniform(size=(n_pool, 2))
        picks = select_batch_indices(existing, (1.1, 1.1), pool, batch)
        assert len(set(picks)) == batch
        optimum = max(joint_hvi(existing, pool, s, (1.1, 1.1)) for s in itertools.combinations(range(n_pool), batch))
        assert joint_hvi(existing, pool, picks, (1.1, 1.1)) >= bound * optimum - 1e-12


def test_fallback_fills_with_smallest_f2():
    existing = np.array([(0.0, 0.0)])
    pool = np.array([(0.5, 0.7), (0.4, 0.2), (0.9, 0.3)])
    assert select_batch_indices(existing, (1.0, 1.0), pool, 2) == [1, 2]


def test_select_batch_returns_distinct_strategies():
    s1, s2 = Strategy.from_array([0.3, 0.6]), Strategy.from_array([0.9, 0.1])
    pool = [(s1, (0.5, 0.5)), (s1, (0.5, 0.5)), (s2, (0.95, 0.95))]
    picked = select_batch(FrontSet(points=(), reference=(1.0, 1.0)), pool, 2)
    assert picked == [s1, s2]


def test_batch_shrinks_to_the_number_of_distinct_strategies():
    X = np.array([[0.2, 0.2], [0.2, 0.2], [0.2, 0.2 + 1e-15]])
    pool = np.array([(0.8, 0.1), (0.8, 0.1), (0.8, 0.1)])
    assert select_batch_indices(np.empty((0, 2)), (1.0, 1.0), pool, 3, strategies=X) == [0]


def test_selection_is_deterministic(rng):
    pool = rng.uniform(size=(30, 2))
    existing = rng.uniform(size=(5, 2))
    assert select_batch_indices(existing, (1.1, 1.1), pool, 6) == select_batch_indices(existing, (1.1, 1.1), pool, 6)


def test_normalizer_maps_to_unit_box():
    norm = ObjectiveNormalizer([(0.2, 3.0), (0.6, 5.0), (0.4, 4.0)])
    out = norm.transform([(0.2, 3.0), (0.6, 5.0)])
    assert np.allclose(out, [[0.0, 0.0], [1.0, 1.0]])
    flat = ObjectiveNormalizer([(0.5, 2.0), (0.5, 2.0)])
    assert np.allclose(flat.transform([(0.5, 3.0)]), [[0.0, 1.0]])
