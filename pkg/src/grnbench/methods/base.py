"""Shared estimator surface for network-inference methods."""

from __future__ import annotations

from sklearn.base import BaseEstimator

from grnbench.dataset import ExpressionDataset, RankedEdgeList
from grnbench.validation import check_is_fitted


class GraphInferenceMethod(BaseEstimator):
    """Base class: ``fit`` consumes a dataset and stores ``edges_``.

    Subclasses implement ``_infer`` and keep their constructor parameters
    flat so that ``get_params`` / ``clone`` work as usual.
    """

    def _infer(self, data: ExpressionDataset) -> RankedEdgeList:
        raise NotImplementedError

    def fit(self, data: ExpressionDataset, y=None):
        if not isinstance(data, ExpressionDataset):
            raise TypeError("fit expects an ExpressionDataset")
        self.edges_ = self._infer(data)
        self.n_genes_in_ = data.n_genes
        return self

    def fit_predict(self, data: ExpressionDataset, y=None) -> RankedEdgeList:
        return self.fit(data).edges_

    def predicted_edges(self) -> RankedEdgeList:
        check_is_fitted(self, "edges_")
        return self.edges_
