"""Statistical evaluation of predicted graphs on held-out perturbational data.

Two complementary metrics: the mean Wasserstein distance over predicted
edges (larger = predicted parents have stronger downstream effects) and
the false omission rate over sampled predicted non-relations (smaller =
fewer missed effects). A mean-position procedure turns per-method metric
pairs into a single ranking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from grnbench.dataset import ExpressionDataset, RankedEdgeList
from grnbench.graphs import reachable_pairs
from grnbench.stats import mann_whitney_u_two_sided, wasserstein1
from grnbench.validation import require


class EvaluationError(RuntimeError):
    """Raised when a metric has nothing it can be computed on."""


@dataclass(frozen=True)
class EvalConfig:
    negative_pair_sample_size: int = 1000
    mwu_alpha: float = 0.05
    seed: int = 0
    min_interventional_cells: int = 5

    def __post_init__(self):
        require(
            self.negative_pair_sample_size >= 1,
            "negative_pair_sample_size must be >= 1",
        )
        require(0.0 < self.mwu_alpha < 1.0, "mwu_alpha must be in (0, 1)")
        require(
            self.min_interventional_cells >= 1,
            "min_interventional_cells must be >= 1",
        )


@dataclass(frozen=True)
class WassersteinMetric:
    mean_wasserstein: float
    edges_scored: int
    edges_skipped: int


@dataclass(frozen=True)
class ForMetric:
    for_value: float
    false_negatives: int
    negatives_tested: int


def _evaluable_sources(test: ExpressionDataset, cfg: EvalConfig) -> set[int]:
    counts = np.bincount(
        test.interventions[test.interventions >= 0], minlength=test.n_genes
    )
    return {int(g) for g in np.nonzero(counts >= cfg.min_interventional_cells)[0]}


def mean_wasserstein_metric(
    graph: RankedEdgeList, test: ExpressionDataset, cfg: EvalConfig | None = None
) -> WassersteinMetric:
    """Average shift of each predicted child under its predicted parent.

    Edges whose parent lacks enough interventional test rows cannot be
    scored; they are skipped and counted, never averaged.
    """
    cfg = cfg if cfg is not None else EvalConfig()
    require(len(graph) >= 1, "graph must contain at least one edge")
    require(graph.max_gene_index() < test.n_genes, "edge index exceeds gene count")
    obs_mask = test.observational_mask()
    require(bool(obs_mask.any()), "test data has no observational rows")

    sources = _evaluable_sources(test, cfg)
    distances = []
    skipped = 0
    for parent, child, _ in graph:
        if parent not in sources:
            skipped += 1
            continue
        interventional = test.values[test.perturbation_mask(parent), child]
        observational = test.values[obs_mask, child]
        distances.append(wasserstein1(interventional, observational))
    if not distances:
        raise EvaluationError(
            "no evaluable edges: no predicted parent has enough "
            "interventional rows in the test data"
        )
    return WassersteinMetric(float(np.mean(distances)), len(distances), skipped)


def negative_pairs(
    graph: RankedEdgeList, test: ExpressionDataset, cfg: EvalConfig
) -> list[tuple[int, int]]:
    """Ordered pairs with no directed path in the graph and a testable parent."""
    m = test.n_genes
    reachable = reachable_pairs(graph, m)
    sources = _evaluable_sources(test, cfg)
    return [
        (i, j)
        for i in sorted(sources)
        for j in range(m)
        if i != j and (i, j) not in reachable
    ]


def false_omission_rate(
    graph: RankedEdgeList, test: ExpressionDataset, cfg: EvalConfig | None = None
) -> ForMetric:
    """Fraction of sampled predicted non-relations showing a significant shift.

    A sampled pair (i, j) is a false negative when the two-sided rank test
    between gene j's i-perturbed and observational values rejects at the
    configured level.
    """
    cfg = cfg if cfg is not None else EvalConfig()
    require(graph.max_gene_index() < test.n_genes, "edge index exceeds gene count")
    obs_mask = test.observational_mask()
    require(bool(obs_mask.any()), "test data has no observational rows")

    candidates = negative_pairs(graph, test, cfg)
    if not candidates:
        raise EvaluationError("graph leaves no testable negatives")
    rng = np.random.default_rng(cfg.seed)
    if len(candidates) > cfg.negative_pair_sample_size:
        chosen = rng.choice(
            len(candidates), size=cfg.negative_pair_sample_size, replace=False
        )
        sample = [candidates[int(c)] for c in chosen]
    else:
        sample = candidates

    false_negatives = 0
    for i, j in sample:
        interventional = test.values[test.perturbation_mask(i), j]
        observational = test.values[obs_mask, j]
        result = mann_whitney_u_two_sided(interventional, observational)
        if result.p_value < cfg.mwu_alpha:
            false_negatives += 1
    return ForMetric(false_negatives / len(sample), false_negatives, len(sample))


def auc_over_fractions(points) -> float:
    """Trapezoidal area under (fraction, value) points."""
    pts = [(float(f), float(v)) for f, v in points]
    require(len(pts) >= 2, "need at least 2 points")
    fractions = [f for f, _ in pts]
    require(
        all(b > a for a, b in zip(fractions, fractions[1:])),
        "fractions must be strictly increasing",
    )
    require(
        fractions[0] >= 0.0 and fractions[-1] <= 1.0, "fractions must lie in [0, 1]"
    )
    area = 0.0
    for (f0, v0), (f1, v1) in zip(pts, pts[1:]):
        area += (f1 - f0) * (v0 + v1) / 2.0
    return area


def delta_25_100(points) -> float:
    """Value at fraction 1.0 minus value at fraction 0.25."""
    at_25 = None
    at_100 = None
    for f, v in points:
        if abs(float(f) - 0.25) < 1e-9:
            at_25 = float(v)
        if abs(float(f) - 1.0) < 1e-9:
            at_100 = float(v)
    require(at_25 is not None, "points must include fraction 0.25")
    require(at_100 is not None, "points must include fraction 1.0")
    return at_100 - at_25


@dataclass(frozen=True)
class RankingRow:
    method: str
    rank_wasserstein: int
    rank_for: int
    mean_position: float
    wasserstein: float
    for_value: float


def mean_position_ranking(results: dict[str, tuple[float, float]]) -> list[RankingRow]:
    """Rank methods by Wasserstein (descending) and FOR (ascending).

    Each metric assigns distinct ranks; a tie within one metric is broken
    by the other metric, then by method name. The mean of the two ranks
    orders the output, with residual ties broken by Wasserstein rank and
    then name.
    """
    require(len(results) >= 1, "need at least one method")
    names = list(results)
    by_wasserstein = sorted(
        names, key=lambda n: (-results[n][0], results[n][1], n)
    )
    by_for = sorted(names, key=lambda n: (results[n][1], -results[n][0], n))
    rank_w = {n: r + 1 for r, n in enumerate(by_wasserstein)}
    rank_f = {n: r + 1 for r, n in enumerate(by_for)}
    rows = [
        RankingRow(
            method=n,
            rank_wasserstein=rank_w[n],
            rank_for=rank_f[n],
            mean_position=(rank_w[n] + rank_f[n]) / 2.0,
            wasserstein=results[n][0],
            for_value=results[n][1],
        )
        for n in names
    ]
    rows.sort(key=lambda r: (r.mean_position, r.rank_wasserstein, r.method))
    return rows
