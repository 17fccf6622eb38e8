"""Construction-time invariants of the core data types."""

import numpy as np
import pytest

from grnbench.dataset import (
    OBSERVATIONAL,
    ExpressionDataset,
    RankedEdgeList,
    SyntheticGroundTruth,
    WeightedAdjacency,
)


def make_dataset(**overrides):
    kwargs = dict(
        values=np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]),
        gene_names=("A", "B"),
        interventions=np.array([OBSERVATIONAL, 0, 1]),
    )
    kwargs.update(overrides)
    return ExpressionDataset(**kwargs)


class TestExpressionDataset:
    def test_valid_construction(self):
        data = make_dataset()
        assert data.n_cells == 3
        assert data.n_genes == 2
        assert data.perturbed_genes().tolist() == [0, 1]

    def test_values_are_immutable(self):
        data = make_dataset()
        with pytest.raises(ValueError):
            data.values[0, 0] = 9.0

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            make_dataset(values=np.array([[1.0, np.nan]] * 3))

    def test_label_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            make_dataset(interventions=np.array([0, 1, 2]))

    def test_single_gene_rejected(self):
        with pytest.raises(ValueError):
            ExpressionDataset(
                np.ones((2, 1)), ("A",), np.full(2, OBSERVATIONAL)
            )

    def test_duplicate_gene_names_rejected(self):
        with pytest.raises(ValueError):
            make_dataset(gene_names=("A", "A"))

    def test_delimiter_in_gene_name_rejected(self):
        with pytest.raises(ValueError):
            make_dataset(gene_names=("A", "B\tC"))

    def test_sentinel_gene_name_rejected(self):
        with pytest.raises(ValueError):
            make_dataset(gene_names=("A", "non-targeting"))

    def test_strip_interventions(self):
        stripped = make_dataset().strip_interventions()
        assert stripped.perturbed_genes().size == 0
        assert np.array_equal(stripped.values, make_dataset().values)

    def test_condition_selectors(self):
        data = make_dataset()
        assert data.observational_values(1).tolist() == [2.0]
        assert data.interventional_values(0, 1).tolist() == [4.0]
        assert data.gene_index("B") == 1
        with pytest.raises(KeyError):
            data.gene_index("missing")


class TestRankedEdgeList:
    def test_valid(self):
        edges = RankedEdgeList(((0, 1, 2.0), (1, 0, 1.0), (2, 1, 1.0)))
        assert len(edges) == 3
        assert edges.top(2).pairs() == [(0, 1), (1, 0)]

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            RankedEdgeList(((1, 1, 1.0),))

    def test_duplicate_pair_rejected(self):
        with pytest.raises(ValueError):
            RankedEdgeList(((0, 1, 2.0), (0, 1, 1.0)))

    def test_increasing_scores_rejected(self):
        with pytest.raises(ValueError):
            RankedEdgeList(((0, 1, 1.0), (1, 0, 2.0)))

    def test_non_finite_score_rejected(self):
        with pytest.raises(ValueError):
            RankedEdgeList(((0, 1, np.nan),))

    def test_empty_is_valid(self):
        assert len(RankedEdgeList(())) == 0


class TestWeightedAdjacency:
    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValueError):
            WeightedAdjacency(np.eye(3))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            WeightedAdjacency(np.zeros((2, 3)))

    def test_edge_set(self):
        weights = np.zeros((3, 3))
        weights[0, 2] = -1.5
        adj = WeightedAdjacency(weights)
        assert adj.edge_set() == {(0, 2)}
        assert adj.n_edges() == 1


class TestSyntheticGroundTruth:
    def test_cyclic_graph_rejected(self):
        weights = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(ValueError):
            SyntheticGroundTruth(WeightedAdjacency(weights))

    def test_ranked_edges_by_magnitude(self):
        weights = np.zeros((3, 3))
        weights[0, 1] = -2.0
        weights[1, 2] = 1.0
        truth = SyntheticGroundTruth(WeightedAdjacency(weights), {"seed": 0})
        assert truth.ranked_edges().pairs() == [(0, 1), (1, 2)]
