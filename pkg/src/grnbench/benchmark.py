"""End-to-end benchmark protocol: split, ration interventions, infer, score.

For every method, intervention fraction and seed, the training split is
reduced to the chosen fraction of perturbed genes, the method is fitted on
that subset, and both metrics are computed on the untouched held-out test
split. Per-(method, fraction) medians across seeds feed the area under the
fraction curve, the 25-to-100 percent delta, and the final ranking.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from grnbench.boosting import GbmParams
from grnbench.dataset import OBSERVATIONAL, ExpressionDataset
from grnbench.evaluation import (
    EvalConfig,
    auc_over_fractions,
    delta_25_100,
    false_omission_rate,
    mean_position_ranking,
    mean_wasserstein_metric,
)
from grnbench.io import dump_report, emit_edges, load_dataset
from grnbench.methods import (
    BetterBoost,
    GRNBoost,
    Guanlab,
    MeanDifference,
    SparseRC,
    SparseRcOptions,
)
from grnbench.synth import SemConfig, generate_dag, simulate_sem
from grnbench.validation import ValidationError, require

REPORT_VERSION = 1

METHOD_NAMES = ("mean_difference", "betterboost", "guanlab", "sparserc", "grnboost")


@dataclass(frozen=True)
class MethodSpec:
    """One benchmark entry: a registry name plus per-method options."""

    name: str
    label: str = ""
    k: int = 1000
    gbm: dict = field(default_factory=dict)
    sparserc: dict = field(default_factory=dict)
    strip_interventions: bool = False

    def __post_init__(self):
        require(self.name in METHOD_NAMES, f"unknown method {self.name!r}")
        if not self.label:
            object.__setattr__(self, "label", self.name)

    def build(self, seed: int):
        if self.name == "mean_difference":
            return MeanDifference(k=self.k)
        if self.name == "sparserc":
            return SparseRC(options=SparseRcOptions(**self.sparserc))
        if self.name == "guanlab":
            params = GbmParams(objective="binary_logloss", seed=seed, **self.gbm)
            return Guanlab(k=self.k, gbm_params=params, seed=seed)
        params = GbmParams(objective="squared_error", seed=seed, **self.gbm)
        if self.name == "betterboost":
            return BetterBoost(k=self.k, gbm_params=params)
        return GRNBoost(k=self.k, gbm_params=params)


@dataclass(frozen=True)
class BenchmarkConfig:
    methods: tuple[MethodSpec, ...]
    dataset_path: str | None = None
    synthetic: dict | None = None
    fractions: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    seeds: tuple[int, ...] = (0, 1, 2)
    test_fraction: float = 0.2
    eval_config: EvalConfig = field(default_factory=EvalConfig)
    output_dir: str | None = None
    threads: int = 1

    def __post_init__(self):
        require(len(self.methods) >= 1, "at least one method is required")
        require(len(self.seeds) >= 1, "at least one seed is required")
        require(0.0 < self.test_fraction < 1.0, "test_fraction must be in (0, 1)")
        require(
            all(0.0 < f <= 1.0 for f in self.fractions),
            "fractions must lie in (0, 1]",
        )
        require(
            all(b > a for a, b in zip(self.fractions, self.fractions[1:])),
            "fractions must be sorted ascending without duplicates",
        )
        require(
            (self.dataset_path is None) != (self.synthetic is None),
            "exactly one of dataset_path and synthetic must be given",
        )
        labels = [m.label for m in self.methods]
        require(len(set(labels)) == len(labels), "method labels must be unique")
        require(self.threads >= 1, "threads must be >= 1")


def split_train_test(
    data: ExpressionDataset, test_fraction: float, seed: int
) -> tuple[ExpressionDataset, ExpressionDataset]:
    """Stratified split: every label with >= 2 cells lands in both parts."""
    require(0.0 < test_fraction < 1.0, "test_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    test_mask = np.zeros(data.n_cells, dtype=bool)
    labels = sorted(int(v) for v in np.unique(data.interventions))
    for label in labels:
        rows = np.nonzero(data.interventions == label)[0]
        if rows.size < 2:
            warnings.warn(
                f"label {label} has {rows.size} row(s); keeping it in the "
                "training split only",
                stacklevel=2,
            )
            continue
        n_test = int(round(rows.size * test_fraction))
        n_test = min(max(n_test, 1), rows.size - 1)
        chosen = rng.permutation(rows)[:n_test]
        test_mask[chosen] = True
    require(bool((~test_mask).any()), "training split would be empty")
    require(bool(test_mask.any()), "test split would be empty")
    return data.subset_rows(~test_mask), data.subset_rows(test_mask)


def subset_interventions(
    train: ExpressionDataset, fraction: float, seed: int
) -> ExpressionDataset:
    """Keep ceil(fraction * P) of the P perturbed genes, dropping the rest.

    Observational rows always survive. The retained gene set is a prefix of
    a seeded permutation, so smaller fractions are nested inside larger
    ones under the same seed.
    """
    require(0.0 < fraction <= 1.0, "fraction must be in (0, 1]")
    perturbed = train.perturbed_genes()
    if perturbed.size == 0 or fraction == 1.0:
        return train
    keep_count = math.ceil(fraction * perturbed.size - 1e-9)
    rng = np.random.default_rng(seed)
    kept = set(int(g) for g in rng.permutation(perturbed)[:keep_count])
    mask = np.array(
        [
            label == OBSERVATIONAL or label in kept
            for label in train.interventions
        ],
        dtype=bool,
    )
    return train.subset_rows(mask)


def _materialize_dataset(cfg: BenchmarkConfig) -> ExpressionDataset:
    if cfg.dataset_path is not None:
        return load_dataset(cfg.dataset_path)
    return synthesize_dataset(dict(cfg.synthetic))[0]


def synthesize_dataset(spec: dict):
    """Dataset (and ground truth) from a flat synthetic-spec dictionary.

    Recognized keys: the SemConfig fields plus ``n_obs``,
    ``n_per_intervention`` and ``intervened_genes`` ("all", a count, or an
    explicit list of gene indices).
    """
    spec = dict(spec)
    n_obs = int(spec.pop("n_obs", 500))
    n_per_intervention = int(spec.pop("n_per_intervention", 50))
    intervened = spec.pop("intervened_genes", "all")
    if "weight_range" in spec:
        spec["weight_range"] = tuple(spec["weight_range"])
    sem = SemConfig(**spec)
    dag = generate_dag(sem)
    if intervened == "all":
        genes = set(range(sem.d))
    elif isinstance(intervened, int):
        require(0 <= intervened <= sem.d, "intervened gene count out of range")
        genes = set(range(intervened))
    else:
        genes = {int(g) for g in intervened}
    return simulate_sem(dag, n_obs, n_per_intervention, genes, sem)


def _fraction_key(fraction: float) -> str:
    return format(fraction, "g")


def _run_single(
    spec: MethodSpec,
    fraction: float,
    seed: int,
    train: ExpressionDataset,
    test: ExpressionDataset,
    eval_config: EvalConfig,
):
    record: dict = {
        "method": spec.label,
        "fraction": fraction,
        "seed": seed,
    }
    try:
        subset = subset_interventions(train, fraction, seed)
        if spec.strip_interventions:
            subset = subset.strip_interventions()
        edges = spec.build(seed).fit_predict(subset)
        wasserstein = mean_wasserstein_metric(edges, test, eval_config)
        for_metric = false_omission_rate(edges, test, eval_config)
        record.update(
            {
                "n_edges": len(edges),
                "mean_wasserstein": wasserstein.mean_wasserstein,
                "edges_scored": wasserstein.edges_scored,
                "edges_skipped": wasserstein.edges_skipped,
                "for_value": for_metric.for_value,
                "false_negatives": for_metric.false_negatives,
                "negatives_tested": for_metric.negatives_tested,
            }
        )
        return record, edges
    except Exception as exc:  # failures are reported, never fatal
        record["error"] = f"{type(exc).__name__}: {exc}"
        return record, None


def run_benchmark(cfg: BenchmarkConfig) -> dict:
    """Execute the full protocol and return the report tree.

    When ``cfg.output_dir`` is set, the report and each run's edge list are
    persisted there with deterministic bytes.
    """
    data = _materialize_dataset(cfg)
    splits = {
        seed: split_train_test(data, cfg.test_fraction, seed) for seed in cfg.seeds
    }

    jobs = [
        (spec, fraction, seed)
        for spec in cfg.methods
        for fraction in cfg.fractions
        for seed in cfg.seeds
    ]

    def execute(job):
        spec, fraction, seed = job
        train, test = splits[seed]
        return _run_single(spec, fraction, seed, train, test, cfg.eval_config)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            outcomes = list(pool.map(execute, jobs))
    else:
        outcomes = [execute(job) for job in jobs]

    runs = []
    edge_lists = {}
    for (spec, fraction, seed), (record, edges) in zip(jobs, outcomes):
        runs.append(record)
        if edges is not None:
            edge_lists[(spec.label, fraction, seed)] = edges

    aggregates: dict[str, dict[str, dict[str, float | int]]] = {}
    for spec in cfg.methods:
        per_fraction: dict[str, dict[str, float | int]] = {}
        for fraction in cfg.fractions:
            values = [
                (r["mean_wasserstein"], r["for_value"])
                for r in runs
                if r["method"] == spec.label
                and r["fraction"] == fraction
                and "error" not in r
            ]
            if values:
                per_fraction[_fraction_key(fraction)] = {
                    "median_wasserstein": float(np.median([v[0] for v in values])),
                    "median_for": float(np.median([v[1] for v in values])),
                    "n_runs": len(values),
                }
        aggregates[spec.label] = per_fraction

    summaries = {}
    for spec in cfg.methods:
        series = [
            (fraction, aggregates[spec.label][_fraction_key(fraction)]["median_wasserstein"])
            for fraction in cfg.fractions
            if _fraction_key(fraction) in aggregates[spec.label]
        ]
        summary: dict = {"fractions_evaluated": [f for f, _ in series]}
        if len(series) >= 2:
            summary["auc"] = auc_over_fractions(series)
        else:
            summary["auc"] = None
            summary["auc_undefined"] = "needs at least two evaluated fractions"
        try:
            summary["delta_25_100"] = delta_25_100(series)
        except ValidationError:
            summary["delta_25_100"] = None
        summaries[spec.label] = summary

    full_fraction = _fraction_key(1.0)
    ranking_inputs = {
        label: (
            per_fraction[full_fraction]["median_wasserstein"],
            per_fraction[full_fraction]["median_for"],
        )
        for label, per_fraction in aggregates.items()
        if full_fraction in per_fraction
    }
    ranking = (
        [
            {
                "method": row.method,
                "rank_wasserstein": row.rank_wasserstein,
                "rank_for": row.rank_for,
                "mean_position": row.mean_position,
                "wasserstein": row.wasserstein,
                "for_value": row.for_value,
            }
            for row in mean_position_ranking(ranking_inputs)
        ]
        if ranking_inputs
        else []
    )

    report = {
        "report_version": REPORT_VERSION,
        "config": _config_echo(cfg),
        "runs": runs,
        "aggregates": aggregates,
        "method_summaries": summaries,
        "ranking": ranking,
    }

    if cfg.output_dir is not None:
        out = Path(cfg.output_dir)
        (out / "edges").mkdir(parents=True, exist_ok=True)
        for (label, fraction, seed), edges in sorted(
            edge_lists.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])
        ):
            name = f"{label}__f{_fraction_key(fraction)}__s{seed}.tsv"
            emit_edges(edges, data.gene_names, out / "edges" / name)
        dump_report(report, out / "report.json")
    return report


def _config_echo(cfg: BenchmarkConfig) -> dict:
    return {
        "dataset_path": cfg.dataset_path,
        "synthetic": cfg.synthetic,
        "methods": [
            {
                "name": m.name,
                "label": m.label,
                "k": m.k,
                "gbm": m.gbm,
                "sparserc": m.sparserc,
                "strip_interventions": m.strip_interventions,
            }
            for m in cfg.methods
        ],
        "fractions": list(cfg.fractions),
        "seeds": list(cfg.seeds),
        "test_fraction": cfg.test_fraction,
        "eval": {
            "negative_pair_sample_size": cfg.eval_config.negative_pair_sample_size,
            "mwu_alpha": cfg.eval_config.mwu_alpha,
            "seed": cfg.eval_config.seed,
            "min_interventional_cells": cfg.eval_config.min_interventional_cells,
        },
    }


def benchmark_config_from_dict(raw: dict) -> BenchmarkConfig:
    """Build a configuration from a parsed JSON document."""
    raw = dict(raw)
    methods = tuple(
        MethodSpec(
            name=m["name"],
            label=m.get("label", ""),
            k=int(m.get("k", 1000)),
            gbm=dict(m.get("gbm", {})),
            sparserc=dict(m.get("sparserc", {})),
            strip_interventions=bool(m.get("strip_interventions", False)),
        )
        for m in raw.get("methods", [])
    )
    eval_raw = raw.get("eval", {})
    eval_config = EvalConfig(
        negative_pair_sample_size=int(eval_raw.get("negative_pair_sample_size", 1000)),
        mwu_alpha=float(eval_raw.get("mwu_alpha", 0.05)),
        seed=int(eval_raw.get("seed", 0)),
        min_interventional_cells=int(eval_raw.get("min_interventional_cells", 5)),
    )
    return BenchmarkConfig(
        methods=methods,
        dataset_path=raw.get("dataset_path"),
        synthetic=raw.get("synthetic"),
        fractions=tuple(float(f) for f in raw.get("fractions", (0.25, 0.5, 0.75, 1.0))),
        seeds=tuple(int(s) for s in raw.get("seeds", (0, 1, 2))),
        test_fraction=float(raw.get("test_fraction", 0.2)),
        eval_config=eval_config,
        output_dir=raw.get("output_dir"),
        threads=int(raw.get("threads", 1)),
    )
