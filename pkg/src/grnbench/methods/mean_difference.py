"""Edge scores from absolute shifts in mean expression under perturbation."""

from __future__ import annotations

import numpy as np

from grnbench.dataset import ExpressionDataset, RankedEdgeList
from grnbench.methods.base import GraphInferenceMethod
from grnbench.validation import ValidationError, require


def mean_difference(data: ExpressionDataset, k: int = 1000) -> RankedEdgeList:
    """Top-k pairs by |observational mean - interventional mean| of the child.

    Only pairs whose parent has interventional rows are eligible; no
    expression thresholding is applied.
    """
    require(k >= 1, "k must be >= 1")
    perturbed = data.perturbed_genes()
    if perturbed.size == 0:
        raise ValidationError("mean_difference needs interventional rows")
    obs_mask = data.observational_mask()
    require(bool(obs_mask.any()), "dataset has no observational rows")

    obs_means = data.values[obs_mask].mean(axis=0)
    entries: list[tuple[int, int, float]] = []
    for source in perturbed:
        source = int(source)
        block = data.values[data.perturbation_mask(source)]
        shift = np.abs(obs_means - block.mean(axis=0))
        entries.extend(
            (source, child, float(shift[child]))
            for child in range(data.n_genes)
            if child != source
        )
    entries.sort(key=lambda e: (-e[2], e[0], e[1]))
    return RankedEdgeList(tuple(entries[:k]))


class MeanDifference(GraphInferenceMethod):
    def __init__(self, k: int = 1000):
        self.k = k

    def _infer(self, data: ExpressionDataset) -> RankedEdgeList:
        return mean_difference(data, self.k)
