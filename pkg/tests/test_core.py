import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from moaodv.core import (
    EvaluatedSolution,
    ParetoArchive,
    apply_mutation,
    crowding_distance,
    crowding_distances,
    dominates,
    fast_nondominated_sort,
    nondominated,
    nondominated_ranks,
    stratified_init,
    uniform_mutation,
)
from moaodv.space import AODV_SPACE, ParameterSpace, validate_genome
from moaodv.utils.random import RandomSource, derive_seeds


def sols(points):
    return [EvaluatedSolution(np.zeros(1), p) for p in points]


def brute_ranks(F):
    """Peel fronts by pairwise comparison only."""
    F = [tuple(f) for f in F]
    ranks = [None] * len(F)
    left = set(range(len(F)))
    r = 0
    while left:
        front = {i for i in left if not any(dominates(F[j], F[i]) for j in left)}
        for i in front:
            ranks[i] = r
        left -= front
        r += 1
    return ranks


objective_sets = arrays(
    np.float64,
    st.tuples(st.integers(1, 40), st.just(2)),
    elements=st.integers(0, 6).map(float),
)


def test_dominates_examples():
    assert dominates((1, 2), (2, 3))
    assert not dominates((1, 2), (1, 2))
    assert not dominates((1, 3), (2, 2))
    assert dominates((1, 2), (1, 3))


def test_sort_examples():
    fronts = fast_nondominated_sort(sols([(1, 2), (2, 1), (2, 2), (3, 3)]))
    assert [[tuple(s.objectives) for s in f] for f in fronts] == [[(1, 2), (2, 1)], [(2, 2)], [(3, 3)]]
    pop = sols([(1, 1)] * 4)
    assert len(fast_nondominated_sort(pop)) == 1 and all(s.rank == 0 for s in pop)
    pop = sols([(1, 1), (2, 2), (3, 3)])
    fast_nondominated_sort(pop)
    assert [s.rank for s in pop] == [0, 1, 2]


@given(objective_sets)
def test_ranks_match_brute_force(F):
    assert nondominated_ranks(F).tolist() == brute_ranks(F)


@given(objective_sets)
def test_front_members_mutually_nondominated(F):
    pop = sols(F)
    for front in fast_nondominated_sort(pop):
        for a, b in itertools.permutations(front, 2):
            assert not dominates(a.objectives, b.objectives)


def test_crowding_examples():
    d = crowding_distances(np.array([(0, 1), (0.5, 0.5), (1, 0)]))
    assert d[0] == np.inf and d[2] == np.inf and d[1] == pytest.approx(2.0)
    assert crowding_distances(np.array([[3.0, 4.0]])).tolist() == [np.inf]
    assert crowding_distances(np.array([[0, 1], [1, 0.0]])).tolist() == [np.inf, np.inf]
    front = sols([(0, 1), (0.5, 0.5), (1, 0)])
    crowding_distance(front)
    assert front[1].crowding == pytest.approx(2.0)


def test_crowding_degenerate_objective_contributes_zero():
    d = crowding_distances(np.array([(0, 5), (1, 5), (2, 5), (3, 5.0)]))
    assert d[1] == pytest.approx(2 / 3) and d[2] == pytest.approx(2 / 3)


def test_archive_examples():
    a = ParetoArchive(5)
    a.insert(sols([(1, 1)])[0])
    assert not a.insert(sols([(2, 2)])[0])
    assert a.objectives.tolist() == [[1, 1]]

    a = ParetoArchive(5)
    for s in sols([(1, 2), (2, 1)]):
        a.insert(s)
    assert a.insert(sols([(0, 0)])[0])
    assert a.objectives.tolist() == [[0, 0]]

    a = ParetoArchive(2)
    for s in sols([(0, 1), (1, 0)]):
        a.insert(s)
    assert a.insert(sols([(0.5, 0.5)])[0])
    assert sorted(map(tuple, a.objectives)) == [(0, 1), (1, 0)]


def test_archive_rejects_duplicates():
    a = ParetoArchive(3)
    assert a.insert(sols([(1, 2)])[0])
    assert not a.insert(sols([(1, 2)])[0])
    assert len(a) == 1


def test_archive_evicts_earliest_on_crowding_tie():
    a = ParetoArchive(4)
    for s in sols([(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]):
        a.insert(s)
    # (1,3), (2,2), (3,1) tie at crowding 1.0; (1,3) entered first
    assert sorted(map(tuple, a.objectives)) == [(0, 4), (2, 2), (3, 1), (4, 0)]


@given(st.integers(1, 6), objective_sets)
def test_archive_invariant(capacity, F):
    a = ParetoArchive(capacity)
    for s in sols(F):
        a.insert(s)
        assert len(a) <= capacity
        G = a.objectives
        for i, j in itertools.permutations(range(len(G)), 2):
            assert not dominates(G[i], G[j])
        assert len({tuple(g) for g in G}) == len(G)


def test_nondominated_mask_dedupes():
    F = np.array([(1, 1), (1, 1), (0, 2), (2, 2.0)])
    assert nondominated(F).tolist() == [True, False, True, False]


def test_stratified_slices():
    rng = RandomSource(3)
    X = stratified_init(AODV_SPACE, 24, rng)
    assert X.shape == (24, 11)
    lo, w = 1.0, 19.0
    assert lo <= X[0, 0] < lo + w / 24
    assert 1 + 23 * w / 24 <= X[23, 0] < 20
    for k in range(24):
        frac = (X[k, :5] - AODV_SPACE.lower[:5]) / AODV_SPACE.width[:5]
        assert np.all((frac >= k / 24) & (frac < (k + 1) / 24))
        # one offset shared by the continuous components
        np.testing.assert_allclose(frac, frac[0], atol=1e-12)
        assert validate_genome(AODV_SPACE, X[k])


def test_stratified_single_and_invalid():
    X = stratified_init(AODV_SPACE, 1, RandomSource(0))
    assert X.shape == (1, 11) and validate_genome(AODV_SPACE, X[0])
    with pytest.raises(ValueError):
        stratified_init(AODV_SPACE, 0, RandomSource(0))


@given(st.integers(1, 50), st.integers(0, 2**32))
def test_stratified_box_slices(n, seed):
    space = ParameterSpace.box(4, -2.0, 3.0)
    X = stratified_init(space, n, RandomSource(seed))
    frac = (X + 2.0) / 5.0
    k = np.arange(n)[:, None]
    assert np.all(frac >= k / n - 1e-12) and np.all(frac < (k + 1) / n + 1e-12)


def test_mutation_examples():
    g = np.array([10.46, 10.55, 20.42, 6.89, 41.13, 21, 6, 6, 7, 3, 19])
    np.testing.assert_array_equal(uniform_mutation(AODV_SPACE, g, 0.0, RandomSource(1)), g)
    mask = np.zeros(11, bool)
    mask[0] = True
    h = g.copy()
    h[0] = 10.0
    assert apply_mutation(AODV_SPACE, h, mask, np.full(11, -0.25))[0] == pytest.approx(5.25)
    h[0] = 20.0
    assert apply_mutation(AODV_SPACE, h, mask, np.full(11, 0.5))[0] == 20.0


@given(st.floats(0, 1), st.integers(0, 2**32))
def test_mutation_closure(p, seed):
    rng = RandomSource(seed)
    g = stratified_init(AODV_SPACE, 5, rng)[int(rng.integers(5))]
    m = uniform_mutation(AODV_SPACE, g, p, rng)
    assert validate_genome(AODV_SPACE, m)


def test_mutation_touches_only_masked():
    g = np.array([10.46, 10.55, 20.42, 6.89, 41.13, 21, 6, 6, 7, 3, 19])
    mask = np.array([True, False] * 5 + [True])
    m = apply_mutation(AODV_SPACE, g, mask, np.full(11, 0.1))
    np.testing.assert_array_equal(m[~mask], g[~mask])


def test_random_source_determinism():
    a, b = RandomSource(42), RandomSource(42)
    assert a.random(5).tolist() == b.random(5).tolist()
    assert a.distinct_pair(7) == b.distinct_pair(7)
    assert RandomSource(1).random() != RandomSource(2).random()
    assert derive_seeds(5, 4) == derive_seeds(5, 4)
    assert len(set(derive_seeds(5, 30))) == 30


@given(st.integers(2, 50), st.integers(0, 2**32))
def test_distinct_pair(n, seed):
    a, b = RandomSource(seed).distinct_pair(n)
    assert a != b and 0 <= a < n and 0 <= b < n
