"""Edge ranking that combines interventional shift tests with predictive scores.

For every gene pair whose parent was perturbed, a two-sample KS test
compares the child's interventional and observational values; the p-values
are jointly FDR-adjusted. Pairs whose parent was never perturbed receive a
neutral default of 0.05. Pairs are ranked by adjusted p-value first and by
predictive importance second, and only pairs at or below the default level
are returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from grnbench.boosting import GbmParams
from grnbench.dataset import ExpressionDataset, RankedEdgeList
from grnbench.methods.base import GraphInferenceMethod
from grnbench.methods.grnboost import PredictiveScores, grnboost_scores
from grnbench.stats import benjamini_hochberg, ks_two_sample
from grnbench.validation import require

DEFAULT_P = 0.05


@dataclass(frozen=True)
class PairwisePvalues:
    """m-by-m adjusted p-values; rows of unperturbed sources hold the default."""

    p: np.ndarray
    perturbed_sources: frozenset[int]

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        require(p.ndim == 2 and p.shape[0] == p.shape[1], "p must be square")
        require(bool(np.all((p >= 0.0) & (p <= 1.0))), "p-values must be in [0, 1]")
        m = p.shape[0]
        for i in range(m):
            if i in self.perturbed_sources:
                continue
            row_ok = all(p[i, j] == DEFAULT_P for j in range(m) if j != i)
            require(row_ok, f"unperturbed source {i} must carry the default p")
        object.__setattr__(self, "p", p)


def interventional_shift_pvalues(data: ExpressionDataset) -> PairwisePvalues:
    """KS-test p-values for every (perturbed source, child) pair, FDR-adjusted
    in a single family; unperturbed sources are filled with the default."""
    obs_mask = data.observational_mask()
    require(bool(obs_mask.any()), "dataset has no observational rows")
    m = data.n_genes
    perturbed = [int(g) for g in data.perturbed_genes()]

    tested_pairs: list[tuple[int, int]] = []
    raw_p: list[float] = []
    for source in perturbed:
        source_mask = data.perturbation_mask(source)
        for child in range(m):
            if child == source:
                continue
            result = ks_two_sample(
                data.values[source_mask, child], data.values[obs_mask, child]
            )
            tested_pairs.append((source, child))
            raw_p.append(result.p_value)

    p = np.full((m, m), DEFAULT_P)
    np.fill_diagonal(p, 1.0)
    if raw_p:
        adjusted = benjamini_hochberg(np.asarray(raw_p))
        for (source, child), value in zip(tested_pairs, adjusted):
            p[source, child] = value
    return PairwisePvalues(p, frozenset(perturbed))


def betterboost(
    data: ExpressionDataset,
    k: int = 1000,
    params: GbmParams | None = None,
    precomputed_scores: PredictiveScores | None = None,
    precomputed_pvalues: PairwisePvalues | None = None,
) -> RankedEdgeList:
    """Rank gene pairs by (adjusted shift p-value, predictive importance).

    Within equal p-values, pairs backed by an actual test sort ahead of
    default-valued pairs, then by importance descending and index order.
    At most ``k`` pairs with p at or below the default level are returned;
    the emitted score is the negated p-value.
    """
    require(data.n_genes >= 2, "need at least 2 genes")
    require(k >= 1, "k must be >= 1")
    scores = (
        precomputed_scores
        if precomputed_scores is not None
        else grnboost_scores(data, params)
    )
    require(scores.m == data.n_genes, "score matrix does not match dataset")
    pvalues = (
        precomputed_pvalues
        if precomputed_pvalues is not None
        else interventional_shift_pvalues(data)
    )
    require(pvalues.p.shape[0] == data.n_genes, "p matrix does not match dataset")

    m = data.n_genes
    tested = pvalues.perturbed_sources
    ranked = sorted(
        (
            (i, j)
            for i in range(m)
            for j in range(m)
            if i != j and pvalues.p[i, j] <= DEFAULT_P
        ),
        key=lambda pair: (
            pvalues.p[pair],
            0 if pair[0] in tested else 1,
            -scores.scores[pair],
            pair,
        ),
    )
    edges = tuple(
        (i, j, -float(pvalues.p[i, j])) for i, j in ranked[:k]
    )
    return RankedEdgeList(edges)


class BetterBoost(GraphInferenceMethod):
    """Estimator wrapper holding the edge budget and regression parameters."""

    def __init__(self, k: int = 1000, gbm_params: GbmParams | None = None):
        self.k = k
        self.gbm_params = gbm_params

    def _infer(self, data: ExpressionDataset) -> RankedEdgeList:
        self.predictive_scores_ = grnboost_scores(data, self.gbm_params)
        self.pvalues_ = interventional_shift_pvalues(data)
        return betterboost(
            data,
            self.k,
            precomputed_scores=self.predictive_scores_,
            precomputed_pvalues=self.pvalues_,
        )
