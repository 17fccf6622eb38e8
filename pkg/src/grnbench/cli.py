"""Command-line interface: generate, infer, evaluate, bench, rank."""

from __future__ import annotations

import json
from pathlib import Path

import click

from grnbench.benchmark import (
    MethodSpec,
    benchmark_config_from_dict,
    run_benchmark,
    synthesize_dataset,
)
from grnbench.evaluation import (
    EvalConfig,
    false_omission_rate,
    mean_position_ranking,
    mean_wasserstein_metric,
)
from grnbench.io import (
    dump_report,
    emit_edges,
    load_dataset,
    load_edges,
    load_report,
    save_dataset,
)

FULL_FRACTION_KEY = "1"


@click.group()
@click.option("--seed", default=0, show_default=True, help="Default random seed.")
@click.option(
    "--output-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory for generated artifacts.",
)
@click.option("--threads", default=1, show_default=True, help="Worker pool size.")
@click.pass_context
def main(ctx, seed, output_dir, threads):
    """Benchmark toolkit for gene network inference from perturbational data."""
    ctx.obj = {"seed": seed, "output_dir": output_dir, "threads": threads}


@main.command()
@click.option("--genes", "-d", default=20, show_default=True)
@click.option("--expected-degree", default=2.0, show_default=True)
@click.option("--weight-low", default=0.5, show_default=True)
@click.option("--weight-high", default=2.0, show_default=True)
@click.option("--noise-scale", default=0.5, show_default=True)
@click.option("--intervention-value", default=0.0, show_default=True)
@click.option("--n-obs", default=500, show_default=True)
@click.option("--n-per-intervention", default=50, show_default=True)
@click.option(
    "--intervened",
    default=-1,
    show_default=True,
    help="How many genes receive interventions; -1 means all.",
)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option(
    "--truth-out",
    type=click.Path(dir_okay=False),
    default=None,
    help="Optional path for the generating graph as an edge list.",
)
@click.pass_context
def generate(
    ctx,
    genes,
    expected_degree,
    weight_low,
    weight_high,
    noise_scale,
    intervention_value,
    n_obs,
    n_per_intervention,
    intervened,
    out,
    truth_out,
):
    """Write a synthetic perturbational dataset."""
    spec = {
        "d": genes,
        "expected_degree": expected_degree,
        "weight_range": (weight_low, weight_high),
        "noise_scale": noise_scale,
        "intervention_value": intervention_value,
        "seed": ctx.obj["seed"],
        "n_obs": n_obs,
        "n_per_intervention": n_per_intervention,
        "intervened_genes": "all" if intervened < 0 else intervened,
    }
    data, truth = synthesize_dataset(spec)
    save_dataset(data, out)
    click.echo(f"wrote {data.n_cells} cells x {data.n_genes} genes to {out}")
    if truth_out is not None:
        emit_edges(truth.ranked_edges(), data.gene_names, truth_out)
        click.echo(f"wrote {truth.dag.n_edges()} true edges to {truth_out}")


@main.command()
@click.option(
    "--method",
    type=click.Choice(["mean_difference", "betterboost", "guanlab", "sparserc", "grnboost"]),
    required=True,
)
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--k", default=1000, show_default=True, help="Edge budget.")
@click.option(
    "--num-iterations",
    default=None,
    type=int,
    help="Override the boosting round count for tree-based methods.",
)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def infer(ctx, method, dataset, k, num_iterations, out):
    """Run one inference method on one dataset and write the edge list."""
    data = load_dataset(dataset)
    gbm = {} if num_iterations is None else {"num_iterations": num_iterations}
    spec = MethodSpec(name=method, k=k, gbm=gbm)
    edges = spec.build(ctx.obj["seed"]).fit_predict(data)
    emit_edges(edges, data.gene_names, out)
    click.echo(f"wrote {len(edges)} edges to {out}")


@main.command()
@click.option("--edges", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--alpha", default=0.05, show_default=True)
@click.option("--negatives", default=1000, show_default=True)
@click.option("--min-cells", default=5, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def evaluate(ctx, edges, dataset, alpha, negatives, min_cells, out):
    """Score an edge list against a dataset treated as held-out test data."""
    data = load_dataset(dataset)
    edge_list = load_edges(edges, data.gene_names)
    cfg = EvalConfig(
        negative_pair_sample_size=negatives,
        mwu_alpha=alpha,
        seed=ctx.obj["seed"],
        min_interventional_cells=min_cells,
    )
    wasserstein = mean_wasserstein_metric(edge_list, data, cfg)
    for_metric = false_omission_rate(edge_list, data, cfg)
    metrics = {
        "mean_wasserstein": wasserstein.mean_wasserstein,
        "edges_scored": wasserstein.edges_scored,
        "edges_skipped": wasserstein.edges_skipped,
        "for_value": for_metric.for_value,
        "false_negatives": for_metric.false_negatives,
        "negatives_tested": for_metric.negatives_tested,
    }
    text = dump_report(metrics, out)
    if out is None:
        click.echo(text, nl=False)


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def bench(ctx, config_file):
    """Run the full benchmark protocol described by a JSON config file."""
    raw = json.loads(Path(config_file).read_text(encoding="utf-8"))
    if ctx.obj["output_dir"] is not None:
        raw["output_dir"] = ctx.obj["output_dir"]
    if ctx.obj["threads"] != 1:
        raw["threads"] = ctx.obj["threads"]
    cfg = benchmark_config_from_dict(raw)
    report = run_benchmark(cfg)
    if cfg.output_dir is None:
        click.echo(dump_report(report), nl=False)
    else:
        click.echo(f"report written to {Path(cfg.output_dir) / 'report.json'}")
        failures = [r for r in report["runs"] if "error" in r]
        if failures:
            click.echo(f"{len(failures)} run(s) failed; see the report", err=True)


def _metrics_from_file(path: str) -> dict[str, tuple[float, float]]:
    document = load_report(path)
    if isinstance(document, dict) and "report_version" in document:
        out = {}
        for label, per_fraction in document["aggregates"].items():
            if FULL_FRACTION_KEY in per_fraction:
                cell = per_fraction[FULL_FRACTION_KEY]
                out[label] = (cell["median_wasserstein"], cell["median_for"])
        if not out:
            raise click.ClickException(
                f"{path}: report has no aggregates at fraction 1.0"
            )
        return out
    rows = document["methods"] if isinstance(document, dict) else document
    try:
        return {
            row["method"]: (float(row["wasserstein"]), float(row["for_value"]))
            for row in rows
        }
    except (KeyError, TypeError) as exc:
        raise click.ClickException(
            f"{path}: expected a bench report or rows with "
            f"method/wasserstein/for_value fields ({exc})"
        ) from None


@main.command()
@click.argument("inputs", type=click.Path(exists=True, dir_okay=False), nargs=-1)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def rank(inputs, out):
    """Rank methods from one or more metric tables or bench reports.

    With several inputs, each file is ranked separately and the final
    ordering averages every per-file rank.
    """
    if not inputs:
        raise click.ClickException("provide at least one metrics file")
    per_file = [_metrics_from_file(path) for path in inputs]
    common = set(per_file[0])
    for path, metrics in zip(inputs[1:], per_file[1:]):
        if set(metrics) != common:
            difference = ", ".join(sorted(set(metrics) ^ common))
            raise click.ClickException(
                f"{path} disagrees on the method set (mismatch: {difference})"
            )

    if len(per_file) == 1:
        rows = mean_position_ranking(per_file[0])
        lines = ["method\trank_wasserstein\trank_for\tmean_position\twasserstein\tfor_value"]
        lines += [
            f"{r.method}\t{r.rank_wasserstein}\t{r.rank_for}\t{r.mean_position:g}"
            f"\t{r.wasserstein:g}\t{r.for_value:g}"
            for r in rows
        ]
    else:
        collected: dict[str, list[int]] = {name: [] for name in common}
        for metrics in per_file:
            for row in mean_position_ranking(metrics):
                collected[row.method].extend([row.rank_wasserstein, row.rank_for])
        averaged = sorted(
            ((name, sum(ranks) / len(ranks)) for name, ranks in collected.items()),
            key=lambda e: (e[1], e[0]),
        )
        lines = ["method\tmean_position"]
        lines += [f"{name}\t{pos:g}" for name, pos in averaged]

    text = "\n".join(lines) + "\n"
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main(prog_name="grnbench")
