"""Predictive edge scores from per-target boosted-tree regressions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from grnbench.boosting import GbmParams, feature_importance, fit_gbm
from grnbench.dataset import ExpressionDataset, RankedEdgeList
from grnbench.methods.base import GraphInferenceMethod
from grnbench.validation import require


@dataclass(frozen=True)
class PredictiveScores:
    """m-by-m matrix; entry (i, j) scores gene i as a predictor of gene j."""

    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        require(scores.ndim == 2 and scores.shape[0] == scores.shape[1],
                "scores must be a square matrix")
        require(bool(np.all(np.isfinite(scores))), "scores must be finite")
        require(bool(np.all(scores >= 0.0)), "scores must be non-negative")
        require(bool(np.all(np.diagonal(scores) == 0.0)),
                "diagonal must be zero")
        object.__setattr__(self, "scores", scores)

    @property
    def m(self) -> int:
        return self.scores.shape[0]


def default_regression_params() -> GbmParams:
    return GbmParams(objective="squared_error")


def grnboost_scores(
    data: ExpressionDataset, params: GbmParams | None = None
) -> PredictiveScores:
    """Importance of every gene for predicting every other gene.

    Each target gene is regressed on the remaining genes over all rows,
    observational and interventional alike; the score of a candidate
    parent is its total split gain in that model.
    """
    if params is None:
        params = default_regression_params()
    require(params.objective == "squared_error",
            "predictive scores use squared-error regression")
    m = data.n_genes
    scores = np.zeros((m, m))
    values = data.values
    for target in range(m):
        feature_genes = [g for g in range(m) if g != target]
        model = fit_gbm(values[:, feature_genes], values[:, target], params)
        scores[feature_genes, target] = feature_importance(model)
    return PredictiveScores(scores)


def top_pairs_by_score(
    scores: np.ndarray, k: int, exclude: set[tuple[int, int]] | None = None
) -> list[tuple[int, int, float]]:
    """Top-k off-diagonal entries, ordered by score descending then index.

    Shared by every score-matrix ranking so that reductions between
    methods agree edge-for-edge.
    """
    require(k >= 1, "k must be >= 1")
    m = scores.shape[0]
    entries = [
        (i, j, float(scores[i, j]))
        for i in range(m)
        for j in range(m)
        if i != j and (exclude is None or (i, j) not in exclude)
    ]
    entries.sort(key=lambda e: (-e[2], e[0], e[1]))
    return entries[:k]


class GRNBoost(GraphInferenceMethod):
    """Purely predictive ranking: top-k pairs by regression importance."""

    def __init__(self, k: int = 1000, gbm_params: GbmParams | None = None):
        self.k = k
        self.gbm_params = gbm_params

    def _infer(self, data: ExpressionDataset) -> RankedEdgeList:
        scores = grnboost_scores(data, self.gbm_params)
        self.predictive_scores_ = scores
        return RankedEdgeList(tuple(top_pairs_by_score(scores.scores, self.k)))
