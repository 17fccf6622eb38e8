"""Evaluation metrics: edge shifts, omission rate, fraction curves, ranking."""

import numpy as np
import pytest

from grnbench.dataset import OBSERVATIONAL, ExpressionDataset, RankedEdgeList
from grnbench.evaluation import (
    EvalConfig,
    EvaluationError,
    auc_over_fractions,
    delta_25_100,
    false_omission_rate,
    mean_position_ranking,
    mean_wasserstein_metric,
)

from conftest import edge_list

# Reference per-method metric pairs used to pin the ranking procedure:
# (method, wasserstein, for_value, rank_w, rank_for, mean_position).
RANKING_TABLE_A = [
    ("Guanlab (top 5k)", 0.386, 0.138, 5, 2, 3.5),
    ("MeanDifference (top 5k)", 0.442, 0.143, 4, 3, 3.5),
    ("Betterboost", 0.447, 0.165, 3, 4, 3.5),
    ("MeanDifference (top 1k)", 0.590, 0.170, 1, 6, 3.5),
    ("Guanlab (top 1k)", 0.495, 0.170, 2, 7, 4.5),
    ("SparseRC", 0.357, 0.165, 6, 5, 5.5),
    ("GRNBoost", 0.133, 0.126, 13, 1, 7.0),
    ("Catran", 0.228, 0.182, 7, 10, 8.5),
    ("DCDI-DSF", 0.163, 0.181, 10, 9, 9.5),
    ("DCDI-G", 0.183, 0.182, 8, 11, 9.5),
    ("DCDFG-MLP", 0.143, 0.180, 12, 8, 10.0),
    ("Sortnregress", 0.171, 0.184, 9, 13, 11.0),
    ("GIES", 0.155, 0.183, 11, 12, 11.5),
]

RANKING_TABLE_B = [
    ("Guanlab (top 5k)", 0.350, 0.072, 5, 1, 3.0),
    ("MeanDifference (top 5k)", 0.384, 0.078, 4, 2, 3.0),
    ("Guanlab (top 1k)", 0.609, 0.108, 3, 3, 3.0),
    ("Betterboost", 0.611, 0.115, 2, 7, 4.5),
    ("MeanDifference (top 1k)", 0.712, 0.122, 1, 8, 4.5),
    ("SparseRC", 0.318, 0.114, 6, 5, 5.5),
    ("Sortnregress", 0.170, 0.114, 9, 6, 7.5),
    ("Catran", 0.218, 0.126, 7, 9, 8.0),
    ("GRNBoost", 0.110, 0.110, 13, 4, 8.5),
    ("DCDI-G", 0.188, 0.135, 8, 12, 10.0),
    ("DCDI-DSF", 0.166, 0.133, 10, 11, 10.5),
    ("DCDFG-MLP", 0.132, 0.129, 12, 10, 11.0),
    ("GIES", 0.143, 0.140, 11, 13, 12.0),
]


def two_condition_dataset(obs_child, pert_child, parent=0, child=1, m=3):
    """Observational rows plus rows perturbing ``parent``; only the child
    column differs between the two blocks."""
    n_obs, n_pert = len(obs_child), len(pert_child)
    values = np.zeros((n_obs + n_pert, m))
    values[:n_obs, child] = obs_child
    values[n_obs:, child] = pert_child
    labels = np.concatenate(
        [np.full(n_obs, OBSERVATIONAL), np.full(n_pert, parent)]
    )
    return ExpressionDataset(
        values, tuple(f"G{i}" for i in range(m)), labels
    )


class TestMeanWasserstein:
    def test_identical_conditions_score_zero(self):
        data = two_condition_dataset([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        cfg = EvalConfig(min_interventional_cells=1)
        result = mean_wasserstein_metric(edge_list([(0, 1)]), data, cfg)
        assert result.mean_wasserstein == 0.0
        assert result.edges_scored == 1
        assert result.edges_skipped == 0

    def test_unit_shift_scores_one(self):
        data = two_condition_dataset([0.0, 1.0], [1.0, 2.0])
        cfg = EvalConfig(min_interventional_cells=1)
        result = mean_wasserstein_metric(edge_list([(0, 1)]), data, cfg)
        assert result.mean_wasserstein == pytest.approx(1.0, abs=1e-12)

    def test_mean_over_scored_edges(self, rng):
        values = np.zeros((40, 3))
        values[:20, 1] = np.linspace(0, 1, 20)
        values[20:, 1] = np.linspace(0, 1, 20) + 0.2
        values[:20, 2] = np.linspace(0, 1, 20)
        values[20:, 2] = np.linspace(0, 1, 20) + 0.6
        labels = np.concatenate([np.full(20, OBSERVATIONAL), np.full(20, 0)])
        data = ExpressionDataset(values, ("A", "B", "C"), labels)
        cfg = EvalConfig(min_interventional_cells=1)
        result = mean_wasserstein_metric(edge_list([(0, 1), (0, 2)]), data, cfg)
        assert result.mean_wasserstein == pytest.approx(0.4, abs=1e-9)

    def test_unscorable_parent_is_skipped_not_averaged(self):
        data = two_condition_dataset([0.0, 1.0], [1.0, 2.0])
        cfg = EvalConfig(min_interventional_cells=1)
        with_extra = mean_wasserstein_metric(
            edge_list([(0, 1), (2, 1)]), data, cfg
        )
        alone = mean_wasserstein_metric(edge_list([(0, 1)]), data, cfg)
        assert with_extra.mean_wasserstein == alone.mean_wasserstein
        assert with_extra.edges_skipped == 1
        assert with_extra.edges_scored + with_extra.edges_skipped == 2

    def test_order_of_edges_is_irrelevant(self):
        data = two_condition_dataset([0.0, 1.0, 2.0], [1.0, 2.0, 3.0])
        cfg = EvalConfig(min_interventional_cells=1)
        forward = mean_wasserstein_metric(edge_list([(0, 1), (0, 2)]), data, cfg)
        backward = mean_wasserstein_metric(edge_list([(0, 2), (0, 1)]), data, cfg)
        assert forward.mean_wasserstein == backward.mean_wasserstein

    def test_min_cells_gate(self):
        data = two_condition_dataset([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(EvaluationError):
            mean_wasserstein_metric(
                edge_list([(0, 1)]), data, EvalConfig(min_interventional_cells=5)
            )

    def test_empty_graph_rejected(self):
        data = two_condition_dataset([0.0], [1.0])
        with pytest.raises(ValueError):
            mean_wasserstein_metric(RankedEdgeList(()), data, EvalConfig())


class TestFalseOmissionRate:
    def null_dataset(self, rng, m=12, n_obs=200, per=40):
        values = rng.normal(size=(n_obs + per * m, m))
        labels = np.concatenate(
            [np.full(n_obs, OBSERVATIONAL), np.repeat(np.arange(m), per)]
        )
        return ExpressionDataset(
            values, tuple(f"G{i:02d}" for i in range(m)), labels
        )

    def test_null_interventions_hit_the_alpha_rate(self, rng):
        data = self.null_dataset(rng)
        cfg = EvalConfig(negative_pair_sample_size=130, seed=0,
                         min_interventional_cells=5)
        result = false_omission_rate(RankedEdgeList(()), data, cfg)
        sigma = (0.05 * 0.95 / result.negatives_tested) ** 0.5
        assert abs(result.for_value - 0.05) <= 3 * sigma

    def test_strong_global_shifts_give_for_one(self, rng):
        m = 4
        values = rng.normal(size=(120, m))
        values[40:, :] += 25.0  # every perturbed block shifted everywhere
        labels = np.concatenate(
            [np.full(40, OBSERVATIONAL), np.repeat(np.arange(m), 20)]
        )
        data = ExpressionDataset(values, ("A", "B", "C", "D"), labels)
        cfg = EvalConfig(min_interventional_cells=5, seed=1)
        result = false_omission_rate(RankedEdgeList(()), data, cfg)
        assert result.for_value == 1.0

    def test_saturated_graph_leaves_no_negatives(self, rng):
        data = self.null_dataset(rng, m=3)
        complete = edge_list([(i, j) for i in range(3) for j in range(3) if i != j])
        with pytest.raises(EvaluationError):
            false_omission_rate(complete, data, EvalConfig())

    def test_sampling_is_deterministic_given_seed(self, rng):
        data = self.null_dataset(rng)
        cfg = EvalConfig(negative_pair_sample_size=50, seed=3)
        first = false_omission_rate(RankedEdgeList(()), data, cfg)
        second = false_omission_rate(RankedEdgeList(()), data, cfg)
        assert first == second

    def test_reachable_pairs_are_not_tested(self, rng):
        data = self.null_dataset(rng, m=4)
        full_fan = edge_list([(0, 1), (1, 2), (2, 3)])
        cfg = EvalConfig(negative_pair_sample_size=10_000, seed=0,
                         min_interventional_cells=5)
        result = false_omission_rate(full_fan, data, cfg)
        # 4*3 ordered pairs minus the 6 reachable ones
        assert result.negatives_tested == 6


class TestFractionCurves:
    def test_constant_series(self):
        points = [(0.25, 0.3), (0.5, 0.3), (0.75, 0.3), (1.0, 0.3)]
        assert auc_over_fractions(points) == pytest.approx(0.75 * 0.3, abs=1e-12)

    def test_triangle(self):
        assert auc_over_fractions([(0.25, 0.0), (1.0, 1.0)]) == pytest.approx(
            0.375, abs=1e-12
        )

    def test_trapezoid_by_hand(self):
        points = [(0.25, 0.2), (0.5, 0.4), (0.75, 0.4), (1.0, 0.6)]
        assert auc_over_fractions(points) == pytest.approx(0.3, abs=1e-12)

    def test_linear_in_values(self, rng):
        fractions = [0.25, 0.5, 0.75, 1.0]
        y1 = rng.uniform(size=4)
        y2 = rng.uniform(size=4)
        combined = auc_over_fractions(list(zip(fractions, 2 * y1 + 3 * y2)))
        parts = 2 * auc_over_fractions(list(zip(fractions, y1))) + 3 * auc_over_fractions(
            list(zip(fractions, y2))
        )
        assert combined == pytest.approx(parts, abs=1e-12)

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            auc_over_fractions([(0.5, 1.0)])

    def test_fractions_must_increase(self):
        with pytest.raises(ValueError):
            auc_over_fractions([(0.5, 1.0), (0.25, 1.0)])

    def test_delta_zero_for_flat_series(self):
        assert delta_25_100([(0.25, 0.4), (1.0, 0.4)]) == 0.0

    def test_delta_sign_convention(self):
        assert delta_25_100([(0.25, 0.3), (1.0, 0.5)]) == pytest.approx(0.2)
        assert delta_25_100([(0.25, 0.5), (1.0, 0.3)]) == pytest.approx(-0.2)

    def test_delta_requires_both_endpoints(self):
        with pytest.raises(ValueError):
            delta_25_100([(0.5, 0.3), (1.0, 0.5)])


class TestMeanPositionRanking:
    def test_single_method(self):
        rows = mean_position_ranking({"only": (0.5, 0.1)})
        assert rows[0].rank_wasserstein == 1
        assert rows[0].rank_for == 1
        assert rows[0].mean_position == 1.0

    def test_dominance(self):
        rows = mean_position_ranking({"A": (0.5, 0.1), "B": (0.4, 0.2)})
        assert [r.method for r in rows] == ["A", "B"]
        assert rows[0].mean_position == 1.0
        assert rows[1].mean_position == 2.0

    @pytest.mark.parametrize("table", [RANKING_TABLE_A, RANKING_TABLE_B])
    def test_reproduces_reference_rank_columns(self, table):
        metrics = {name: (w, f) for name, w, f, _, _, _ in table}
        rows = {r.method: r for r in mean_position_ranking(metrics)}
        for name, _, _, rank_w, rank_f, mean_pos in table:
            assert rows[name].rank_wasserstein == rank_w, name
            assert rows[name].rank_for == rank_f, name
            assert rows[name].mean_position == pytest.approx(mean_pos), name
