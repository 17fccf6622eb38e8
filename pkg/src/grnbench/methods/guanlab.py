"""Supervised pair classifier trained on correlation-derived pseudo-labels.

Every ordered gene pair becomes one training example. The label marks
pairs whose expression correlation is strong (|r| > 0.1), measured on the
parent's interventional rows concatenated with an equal-size observational
sample when interventions exist, and on observational rows alone
otherwise. Features are condition means taken from the row-normalized
matrix; a binary boosted-tree model trained on all pairs then scores and
ranks the same pairs.
"""

from __future__ import annotations

import numpy as np

from grnbench.boosting import GbmParams, fit_gbm, predict_gbm
from grnbench.dataset import ExpressionDataset, RankedEdgeList
from grnbench.methods.base import GraphInferenceMethod
from grnbench.stats import pearson, zscore_rows
from grnbench.validation import ValidationError, require

CORRELATION_THRESHOLD = 0.1


def default_classifier_params(seed: int = 0) -> GbmParams:
    return GbmParams(objective="binary_logloss", seed=seed)


def _pair_table(
    data: ExpressionDataset, seed: int
) -> tuple[list[tuple[int, int]], np.ndarray, np.ndarray]:
    """Ordered pairs with their label and 4-feature rows."""
    obs_rows = np.nonzero(data.observational_mask())[0]
    require(obs_rows.size >= 2, "need at least 2 observational rows")
    raw = data.values
    normalized = zscore_rows(raw)
    obs_mean = normalized[obs_rows].mean(axis=0)

    rng = np.random.default_rng(seed)
    perturbed = [int(g) for g in data.perturbed_genes()]
    sampled_obs: dict[int, np.ndarray] = {}
    intervened_rows: dict[int, np.ndarray] = {}
    for source in perturbed:
        rows = np.nonzero(data.perturbation_mask(source))[0]
        intervened_rows[source] = rows
        replace = obs_rows.size < rows.size
        sampled_obs[source] = rng.choice(obs_rows, size=rows.size, replace=replace)

    m = data.n_genes
    pairs: list[tuple[int, int]] = []
    labels: list[float] = []
    features: list[tuple[float, float, float, float]] = []
    for i in range(m):
        if i in intervened_rows:
            rows = intervened_rows[i]
            sample = sampled_obs[i]
            u = np.concatenate([raw[rows, i], raw[sample, i]])
            interv_mean_i = float(normalized[rows, i].mean())
        for j in range(m):
            if j == i:
                continue
            if i in intervened_rows:
                v = np.concatenate([raw[rows, j], raw[sample, j]])
                r = pearson(u, v)
                pair_features = (
                    float(obs_mean[i]),
                    float(obs_mean[j]),
                    interv_mean_i,
                    float(normalized[rows, j].mean()),
                )
            else:
                r = pearson(raw[obs_rows, i], raw[obs_rows, j])
                pair_features = (float(obs_mean[i]), float(obs_mean[j]), 0.0, np.nan)
            pairs.append((i, j))
            labels.append(1.0 if abs(r) > CORRELATION_THRESHOLD else 0.0)
            features.append(pair_features)
    return pairs, np.asarray(labels), np.asarray(features)


def guanlab(
    data: ExpressionDataset, k: int = 1000, params: GbmParams | None = None, seed: int = 0
) -> RankedEdgeList:
    """Train the pair classifier on every ordered pair and rank by its score."""
    require(data.n_genes >= 2, "need at least 2 genes")
    require(k >= 1, "k must be >= 1")
    if params is None:
        params = default_classifier_params(seed)
    require(params.objective == "binary_logloss",
            "the pair classifier uses the binary objective")

    pairs, labels, features = _pair_table(data, seed)
    n_positive = int(labels.sum())
    if n_positive == 0 or n_positive == len(labels):
        raise ValidationError(
            "pair labels are degenerate: need at least one positive and one "
            f"negative, got {n_positive} positives out of {len(labels)}"
        )
    model = fit_gbm(features, labels, params)
    scores = predict_gbm(model, features)

    ranked = sorted(
        zip(pairs, scores.tolist()), key=lambda e: (-e[1], e[0])
    )
    edges = tuple((i, j, float(s)) for (i, j), s in ranked[:k])
    return RankedEdgeList(edges)


class Guanlab(GraphInferenceMethod):
    def __init__(self, k: int = 1000, gbm_params: GbmParams | None = None, seed: int = 0):
        self.k = k
        self.gbm_params = gbm_params
        self.seed = seed

    def _infer(self, data: ExpressionDataset) -> RankedEdgeList:
        return guanlab(data, self.k, self.gbm_params, self.seed)
