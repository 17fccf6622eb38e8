"""Gene network inference and benchmarking on perturbational expression data."""

from grnbench.benchmark import (
    BenchmarkConfig,
    MethodSpec,
    benchmark_config_from_dict,
    run_benchmark,
    split_train_test,
    subset_interventions,
    synthesize_dataset,
)
from grnbench.boosting import GbmParams, GbmModel, GradientBoosting, fit_gbm, predict_gbm
from grnbench.boosting import feature_importance
from grnbench.dataset import (
    OBSERVATIONAL,
    OBSERVATIONAL_LABEL,
    ExpressionDataset,
    RankedEdgeList,
    SyntheticGroundTruth,
    WeightedAdjacency,
)
from grnbench.evaluation import (
    EvalConfig,
    EvaluationError,
    auc_over_fractions,
    delta_25_100,
    false_omission_rate,
    mean_position_ranking,
    mean_wasserstein_metric,
)
from grnbench.graphs import is_acyclic, reachable_pairs, shd, topological_order
from grnbench.methods import (
    BetterBoost,
    GRNBoost,
    Guanlab,
    MeanDifference,
    SparseRC,
    SparseRcOptions,
    betterboost,
    grnboost_scores,
    guanlab,
    mean_difference,
    sparserc,
)
from grnbench.stats import (
    TestResult,
    benjamini_hochberg,
    ks_two_sample,
    mann_whitney_u_two_sided,
    pearson,
    wasserstein1,
    zscore_rows,
)
from grnbench.synth import (
    SemConfig,
    generate_dag,
    simulate_few_root_causes,
    simulate_sem,
    transitive_weight_closure,
)
from grnbench.validation import ValidationError

__version__ = "0.1.0"

__all__ = [
    "BenchmarkConfig",
    "MethodSpec",
    "benchmark_config_from_dict",
    "run_benchmark",
    "split_train_test",
    "subset_interventions",
    "synthesize_dataset",
    "GbmParams",
    "GbmModel",
    "GradientBoosting",
    "fit_gbm",
    "predict_gbm",
    "feature_importance",
    "OBSERVATIONAL",
    "OBSERVATIONAL_LABEL",
    "ExpressionDataset",
    "RankedEdgeList",
    "SyntheticGroundTruth",
    "WeightedAdjacency",
    "EvalConfig",
    "EvaluationError",
    "auc_over_fractions",
    "delta_25_100",
    "false_omission_rate",
    "mean_position_ranking",
    "mean_wasserstein_metric",
    "is_acyclic",
    "reachable_pairs",
    "shd",
    "topological_order",
    "BetterBoost",
    "GRNBoost",
    "Guanlab",
    "MeanDifference",
    "SparseRC",
    "SparseRcOptions",
    "betterboost",
    "grnboost_scores",
    "guanlab",
    "mean_difference",
    "sparserc",
    "TestResult",
    "benjamini_hochberg",
    "ks_two_sample",
    "mann_whitney_u_two_sided",
    "pearson",
    "wasserstein1",
    "zscore_rows",
    "SemConfig",
    "generate_dag",
    "simulate_few_root_causes",
    "simulate_sem",
    "transitive_weight_closure",
    "ValidationError",
]
