"""Synthetic perturbational data from linear structural equation models.

Two generators share a common weighted DAG: the recursive model, in which
every gene is a weighted sum of its parents plus noise and perturbations
pin a gene to a constant while severing its incoming influences, and the
sparse-input closed form, in which a sparse matrix of root causes
percolates through the graph's weighted transitive closure.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from grnbench.dataset import (
    OBSERVATIONAL,
    ExpressionDataset,
    SyntheticGroundTruth,
    WeightedAdjacency,
)
from grnbench.graphs import topological_order
from grnbench.validation import ValidationError, require


@dataclass(frozen=True)
class SemConfig:
    """Parameters for DAG sampling and both simulation modes."""

    d: int = 20
    expected_degree: float = 2.0
    weight_range: tuple[float, float] = (0.5, 2.0)
    noise_scale: float = 0.5
    root_cause_prob: float = 0.1
    root_cause_magnitude: float = 1.0
    measurement_noise_scale: float = 0.0
    intervention_value: float = 0.0
    seed: int = 0

    def __post_init__(self):
        require(self.d >= 2, "need at least 2 genes")
        require(self.expected_degree >= 0.0, "expected_degree must be >= 0")
        low, high = self.weight_range
        require(0.0 < low <= high, "weight range must satisfy 0 < low <= high")
        require(self.noise_scale >= 0.0, "noise_scale must be >= 0")
        require(
            0.0 <= self.root_cause_prob <= 1.0, "root_cause_prob must be in [0, 1]"
        )
        require(self.root_cause_magnitude > 0.0, "root_cause_magnitude must be > 0")
        require(
            self.measurement_noise_scale >= 0.0,
            "measurement_noise_scale must be >= 0",
        )


def _gene_names(d: int) -> tuple[str, ...]:
    width = max(2, len(str(d - 1)))
    return tuple(f"G{i:0{width}d}" for i in range(d))


def generate_dag(cfg: SemConfig) -> WeightedAdjacency:
    """Sample a random weighted DAG.

    A random permutation fixes a topological order; each forward pair
    becomes an edge with probability expected_degree / (d - 1), with weight
    magnitude uniform in the configured range and random sign.
    """
    rng = np.random.default_rng(cfg.seed)
    d = cfg.d
    order = rng.permutation(d)
    prob = min(1.0, cfg.expected_degree / (d - 1))
    low, high = cfg.weight_range
    weights = np.zeros((d, d))
    for i in range(d):
        for j in range(i + 1, d):
            if rng.random() < prob:
                magnitude = rng.uniform(low, high)
                sign = 1.0 if rng.random() < 0.5 else -1.0
                weights[order[i], order[j]] = sign * magnitude
    return WeightedAdjacency(weights)


def _require_acyclic(dag: WeightedAdjacency) -> list[int]:
    order = topological_order(dag)
    if order is None:
        raise ValidationError("graph must be acyclic")
    return order


def transitive_weight_closure(dag: WeightedAdjacency) -> WeightedAdjacency:
    """Sum of all powers A + A^2 + ... + A^(d-1) of an acyclic matrix.

    Entry (i, j) accumulates the weight products along every directed path
    from i to j; equals (I - A)^{-1} - I.
    """
    _require_acyclic(dag)
    a = dag.weights
    closure = np.zeros_like(a)
    power = np.eye(dag.d)
    for _ in range(dag.d - 1):
        power = power @ a
        closure += power
    np.fill_diagonal(closure, 0.0)
    return WeightedAdjacency(closure)


def _simulate_block(
    weights: np.ndarray,
    order: list[int],
    n_rows: int,
    fixed_gene: int | None,
    fixed_value: float,
    noise: np.ndarray,
) -> np.ndarray:
    """Solve x = xA + noise row-wise in topological order.

    When ``fixed_gene`` is set, that column is pinned to ``fixed_value``
    and its incoming contributions are discarded; downstream genes still
    see the pinned value through their own parents.
    """
    d = weights.shape[0]
    x = np.zeros((n_rows, d))
    for gene in order:
        if fixed_gene is not None and gene == fixed_gene:
            x[:, gene] = fixed_value
        else:
            x[:, gene] = x @ weights[:, gene] + noise[:, gene]
    return x


def simulate_sem(
    dag: WeightedAdjacency,
    n_obs: int,
    n_per_intervention: int,
    intervened_genes,
    cfg: SemConfig,
) -> tuple[ExpressionDataset, SyntheticGroundTruth]:
    """Draw observational and hard-intervention rows from a recursive SEM.

    Interventions pin the targeted gene to ``cfg.intervention_value`` and
    sever its incoming edges for those rows.
    """
    order = _require_acyclic(dag)
    require(n_obs >= 1, "need at least one observational row")
    targets = sorted(int(g) for g in set(intervened_genes))
    for g in targets:
        require(0 <= g < dag.d, f"intervened gene {g} out of range")
    if targets:
        require(n_per_intervention >= 1, "need rows for each intervention")

    rng = np.random.default_rng(cfg.seed)
    blocks = []
    labels = []

    noise = rng.normal(0.0, cfg.noise_scale, size=(n_obs, dag.d))
    blocks.append(_simulate_block(dag.weights, order, n_obs, None, 0.0, noise))
    labels.append(np.full(n_obs, OBSERVATIONAL, dtype=np.int64))

    for gene in targets:
        noise = rng.normal(0.0, cfg.noise_scale, size=(n_per_intervention, dag.d))
        blocks.append(
            _simulate_block(
                dag.weights,
                order,
                n_per_intervention,
                gene,
                cfg.intervention_value,
                noise,
            )
        )
        labels.append(np.full(n_per_intervention, gene, dtype=np.int64))

    data = ExpressionDataset(
        np.vstack(blocks), _gene_names(dag.d), np.concatenate(labels)
    )
    truth = SyntheticGroundTruth(dag, asdict(cfg), cfg.seed)
    return data, truth


def simulate_few_root_causes(
    dag: WeightedAdjacency, n: int, cfg: SemConfig
) -> tuple[ExpressionDataset, SyntheticGroundTruth]:
    """Closed-form SEM draw with a sparse root-cause input matrix.

    The output is (C + N_C)(I + closure(A)) + N_X, where C has a nonzero
    entry with probability ``root_cause_prob``, magnitudes uniform in
    (0, root_cause_magnitude], N_C has scale ``noise_scale`` and N_X has
    scale ``measurement_noise_scale``. All rows are observational.
    """
    _require_acyclic(dag)
    require(n >= 1, "need at least one row")
    rng = np.random.default_rng(cfg.seed)
    d = dag.d

    active = rng.random(size=(n, d)) < cfg.root_cause_prob
    # 1 - U maps [0, 1) draws onto (0, 1]; keeps magnitudes bounded away from 0
    magnitudes = (1.0 - rng.random(size=(n, d))) * cfg.root_cause_magnitude
    root_causes = np.where(active, magnitudes, 0.0)
    input_noise = (
        rng.normal(0.0, cfg.noise_scale, size=(n, d)) if cfg.noise_scale > 0 else 0.0
    )
    measurement_noise = (
        rng.normal(0.0, cfg.measurement_noise_scale, size=(n, d))
        if cfg.measurement_noise_scale > 0
        else 0.0
    )

    closure = transitive_weight_closure(dag).weights
    mixing = np.eye(d) + closure
    values = (root_causes + input_noise) @ mixing + measurement_noise

    data = ExpressionDataset(
        values, _gene_names(d), np.full(n, OBSERVATIONAL, dtype=np.int64)
    )
    parameters = asdict(cfg)
    parameters["n"] = n
    truth = SyntheticGroundTruth(dag, parameters, cfg.seed)
    return data, truth
