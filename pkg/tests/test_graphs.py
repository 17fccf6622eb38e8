"""Graph utilities checked against brute-force oracles."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grnbench.dataset import RankedEdgeList, WeightedAdjacency
from grnbench.graphs import find_cycle, is_acyclic, reachable_pairs, shd

from conftest import edge_list


def closure_by_matrix_powers(pairs, m):
    """Transitive closure via boolean matrix powers."""
    adj = np.zeros((m, m), dtype=bool)
    for p, c in pairs:
        adj[p, c] = True
    reach = adj.copy()
    power = adj.copy()
    for _ in range(m - 1):
        power = (power.astype(int) @ adj.astype(int)) > 0
        reach |= power
    return {(i, j) for i in range(m) for j in range(m) if reach[i, j] and i != j}


def acyclic_by_permutations(pairs, m):
    """A digraph is acyclic iff some node order makes every edge forward."""
    for order in itertools.permutations(range(m)):
        position = {node: k for k, node in enumerate(order)}
        if all(position[p] < position[c] for p, c in pairs):
            return True
    return not pairs


class TestReachablePairs:
    def test_chain_is_transitive(self):
        edges = edge_list([(0, 1), (1, 2)])
        assert reachable_pairs(edges, 3) == {(0, 1), (1, 2), (0, 2)}

    def test_empty_graph(self):
        assert reachable_pairs(RankedEdgeList(()), 3) == set()

    def test_two_cycle(self):
        edges = edge_list([(0, 1), (1, 0)])
        assert reachable_pairs(edges, 2) == {(0, 1), (1, 0)}

    def test_matches_matrix_power_oracle(self, rng):
        for _ in range(100):
            m = int(rng.integers(2, 9))
            density = rng.uniform(0.05, 0.5)
            pairs = [
                (i, j)
                for i in range(m)
                for j in range(m)
                if i != j and rng.random() < density
            ]
            assert reachable_pairs(edge_list(pairs), m) == closure_by_matrix_powers(
                pairs, m
            )

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_adding_an_edge_is_monotone(self, seed):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(2, 8))
        pairs = [
            (i, j)
            for i in range(m)
            for j in range(m)
            if i != j and rng.random() < 0.3
        ]
        candidates = [
            (i, j)
            for i in range(m)
            for j in range(m)
            if i != j and (i, j) not in pairs
        ]
        if not candidates:
            return
        extra = candidates[int(rng.integers(len(candidates)))]
        before = reachable_pairs(edge_list(pairs), m)
        after = reachable_pairs(edge_list(pairs + [extra]), m)
        assert before <= after


class TestShd:
    def test_identical_edge_sets(self):
        truth = WeightedAdjacency(np.array([[0.0, 1.0], [0.0, 0.0]]))
        assert shd(edge_list([(0, 1)]), truth) == 0

    def test_single_reversal_costs_one(self):
        truth = WeightedAdjacency(np.array([[0.0, 0.0], [1.0, 0.0]]))
        assert shd(edge_list([(0, 1)]), truth) == 1

    def test_missing_edge_costs_one(self):
        weights = np.zeros((3, 3))
        weights[0, 1] = 1.0
        weights[1, 2] = -0.5
        truth = WeightedAdjacency(weights)
        assert shd(edge_list([(0, 1)]), truth) == 1

    def test_self_distance_is_zero(self, rng):
        for _ in range(25):
            m = int(rng.integers(2, 8))
            weights = np.triu(rng.normal(size=(m, m)), k=1)
            weights[np.abs(weights) < 0.7] = 0.0
            truth = WeightedAdjacency(weights)
            predicted = edge_list(sorted(truth.edge_set()))
            assert shd(predicted, truth) == 0

    def test_dimension_mismatch_rejected(self):
        truth = WeightedAdjacency(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            shd(edge_list([(0, 5)]), truth)


class TestIsAcyclic:
    def test_zero_matrix(self):
        assert is_acyclic(WeightedAdjacency(np.zeros((3, 3))))

    def test_two_cycle(self):
        weights = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert not is_acyclic(WeightedAdjacency(weights))

    def test_upper_triangular(self, rng):
        weights = np.triu(rng.normal(size=(10, 10)), k=1)
        assert is_acyclic(WeightedAdjacency(weights))

    def test_matches_permutation_oracle(self, rng):
        for _ in range(100):
            m = int(rng.integers(2, 7))
            weights = rng.normal(size=(m, m))
            weights[np.abs(weights) < 1.0] = 0.0
            np.fill_diagonal(weights, 0.0)
            pairs = {(i, j) for i in range(m) for j in range(m) if weights[i, j] != 0}
            assert is_acyclic(WeightedAdjacency(weights)) == acyclic_by_permutations(
                pairs, m
            )


class TestFindCycle:
    def test_returns_none_on_dag(self):
        assert find_cycle({(0, 1), (1, 2)}, 3) is None

    def test_recovers_a_cycle(self):
        cycle = find_cycle({(0, 1), (1, 2), (2, 0)}, 3)
        assert cycle is not None
        assert {edge for edge in cycle} == {(0, 1), (1, 2), (2, 0)}
        heads = [edge[0] for edge in cycle]
        tails = [edge[1] for edge in cycle]
        assert sorted(heads) == sorted(tails)
