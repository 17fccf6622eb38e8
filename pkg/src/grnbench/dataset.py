"""Core data types: expression datasets, ranked edge lists, weighted graphs.

Gene identity is positional: every structure refers to genes by column
index. Gene names are carried along for I/O only. All types are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from grnbench.validation import ValidationError, as_float_matrix, readonly, require

#: Row label marking a cell measured without any perturbation.
OBSERVATIONAL = -1

#: Sentinel used for observational rows in dataset files.
OBSERVATIONAL_LABEL = "non-targeting"


def _check_gene_names(names: tuple[str, ...]) -> None:
    require(len(set(names)) == len(names), "gene names must be unique")
    for name in names:
        require(len(name) > 0, "gene names must be non-empty")
        require(
            "\t" not in name and "\n" not in name and "\r" not in name,
            f"gene name {name!r} contains a delimiter or newline",
        )
        require(
            name != OBSERVATIONAL_LABEL,
            f"gene name {name!r} collides with the observational sentinel",
        )


@dataclass(frozen=True)
class ExpressionDataset:
    """Cells-by-genes expression matrix with a per-cell intervention label.

    ``interventions[i]`` is :data:`OBSERVATIONAL` for unperturbed cells,
    otherwise the column index of the gene perturbed in cell ``i``.
    """

    values: np.ndarray
    gene_names: tuple[str, ...]
    interventions: np.ndarray

    def __post_init__(self):
        values = as_float_matrix(self.values, "values")
        n, m = values.shape
        require(m >= 2, f"need at least 2 genes, got {m}")
        names = tuple(str(g) for g in self.gene_names)
        require(len(names) == m, f"got {len(names)} gene names for {m} columns")
        _check_gene_names(names)
        labels = np.asarray(self.interventions, dtype=np.int64)
        require(labels.shape == (n,), "one intervention label per row is required")
        require(
            bool(np.all((labels >= 0) & (labels < m) | (labels == OBSERVATIONAL))),
            "intervention labels must be gene indices or OBSERVATIONAL",
        )
        object.__setattr__(self, "values", readonly(values))
        object.__setattr__(self, "gene_names", names)
        object.__setattr__(self, "interventions", readonly(labels))

    @property
    def n_cells(self) -> int:
        return self.values.shape[0]

    @property
    def n_genes(self) -> int:
        return self.values.shape[1]

    def gene_index(self, name: str) -> int:
        try:
            return self.gene_names.index(name)
        except ValueError:
            raise KeyError(f"unknown gene {name!r}") from None

    def observational_mask(self) -> np.ndarray:
        return self.interventions == OBSERVATIONAL

    def perturbation_mask(self, gene: int) -> np.ndarray:
        """Rows in which ``gene`` was the perturbation target."""
        require(0 <= gene < self.n_genes, f"gene index {gene} out of range")
        return self.interventions == gene

    def perturbed_genes(self) -> np.ndarray:
        """Sorted array of gene indices with at least one perturbed cell."""
        present = np.unique(self.interventions)
        return present[present != OBSERVATIONAL]

    def observational_values(self, gene: int) -> np.ndarray:
        return self.values[self.observational_mask(), gene]

    def interventional_values(self, source: int, gene: int) -> np.ndarray:
        """Values of ``gene`` in cells where ``source`` was perturbed."""
        return self.values[self.perturbation_mask(source), gene]

    def subset_rows(self, mask: np.ndarray) -> "ExpressionDataset":
        return ExpressionDataset(
            self.values[mask], self.gene_names, self.interventions[mask]
        )

    def strip_interventions(self) -> "ExpressionDataset":
        """Relabel every cell observational, keeping all measurements."""
        labels = np.full(self.n_cells, OBSERVATIONAL, dtype=np.int64)
        return ExpressionDataset(self.values, self.gene_names, labels)


@dataclass(frozen=True)
class RankedEdgeList:
    """Directed candidate edges ordered by non-increasing score.

    Each entry is ``(parent, child, score)`` with parent and child given
    as gene column indices.
    """

    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        normalized = []
        seen: set[tuple[int, int]] = set()
        previous = np.inf
        for k, (parent, child, score) in enumerate(self.edges):
            parent, child, score = int(parent), int(child), float(score)
            require(parent != child, f"edge {k} is a self-loop on {parent}")
            require(
                (parent, child) not in seen,
                f"duplicate edge ({parent}, {child}) at position {k}",
            )
            require(np.isfinite(score), f"edge {k} has non-finite score")
            require(
                score <= previous + 0.0,
                f"scores must be non-increasing (position {k})",
            )
            seen.add((parent, child))
            normalized.append((parent, child, score))
            previous = score
        object.__setattr__(self, "edges", tuple(normalized))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[tuple[int, int, float]]:
        return iter(self.edges)

    def pairs(self) -> list[tuple[int, int]]:
        return [(p, c) for p, c, _ in self.edges]

    def pair_set(self) -> set[tuple[int, int]]:
        return {(p, c) for p, c, _ in self.edges}

    def top(self, k: int) -> "RankedEdgeList":
        require(k >= 0, "k must be non-negative")
        return RankedEdgeList(self.edges[:k])

    def max_gene_index(self) -> int:
        return max((max(p, c) for p, c, _ in self.edges), default=-1)


@dataclass(frozen=True)
class WeightedAdjacency:
    """Dense d-by-d weight matrix; ``weights[i, j]`` is the weight of i -> j."""

    weights: np.ndarray

    def __post_init__(self):
        w = as_float_matrix(self.weights, "weights")
        require(w.shape[0] == w.shape[1], "adjacency matrix must be square")
        require(w.shape[0] >= 2, "adjacency matrix needs at least 2 nodes")
        require(
            bool(np.all(np.diagonal(w) == 0.0)), "adjacency diagonal must be zero"
        )
        object.__setattr__(self, "weights", readonly(w))

    @property
    def d(self) -> int:
        return self.weights.shape[0]

    def edge_set(self) -> set[tuple[int, int]]:
        rows, cols = np.nonzero(self.weights)
        return {(int(i), int(j)) for i, j in zip(rows, cols)}

    def scored_edges(self) -> list[tuple[int, int, float]]:
        rows, cols = np.nonzero(self.weights)
        return [
            (int(i), int(j), float(self.weights[i, j])) for i, j in zip(rows, cols)
        ]

    def n_edges(self) -> int:
        return int(np.count_nonzero(self.weights))


@dataclass(frozen=True)
class SyntheticGroundTruth:
    """The generating graph and parameters behind a synthetic dataset."""

    dag: WeightedAdjacency
    parameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        from grnbench.graphs import is_acyclic

        if not is_acyclic(self.dag):
            raise ValidationError("ground-truth graph must be acyclic")
        object.__setattr__(self, "parameters", dict(self.parameters))

    def ranked_edges(self) -> RankedEdgeList:
        """True edges ranked by absolute weight, for recovery comparisons."""
        scored = [
            (p, c, abs(w))
            for p, c, w in self.dag.scored_edges()
        ]
        scored.sort(key=lambda e: (-e[2], e[0], e[1]))
        return RankedEdgeList(tuple(scored))
