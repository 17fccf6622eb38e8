"""Network-inference methods mapping expression datasets to ranked edges."""

from grnbench.methods.base import GraphInferenceMethod
from grnbench.methods.betterboost import (
    BetterBoost,
    PairwisePvalues,
    betterboost,
    interventional_shift_pvalues,
)
from grnbench.methods.grnboost import (
    GRNBoost,
    PredictiveScores,
    grnboost_scores,
    top_pairs_by_score,
)
from grnbench.methods.guanlab import Guanlab, guanlab
from grnbench.methods.mean_difference import MeanDifference, mean_difference
from grnbench.methods.sparserc import (
    SparseRC,
    SparseRcFit,
    SparseRcOptions,
    sparserc,
    sparserc_fit,
)

__all__ = [
    "GraphInferenceMethod",
    "BetterBoost",
    "PairwisePvalues",
    "betterboost",
    "interventional_shift_pvalues",
    "GRNBoost",
    "PredictiveScores",
    "grnboost_scores",
    "top_pairs_by_score",
    "Guanlab",
    "guanlab",
    "MeanDifference",
    "mean_difference",
    "SparseRC",
    "SparseRcFit",
    "SparseRcOptions",
    "sparserc",
    "sparserc_fit",
]
