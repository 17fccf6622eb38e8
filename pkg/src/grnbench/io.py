"""Dataset and edge-list file formats, plus deterministic report serialization.

Dataset files are delimiter-separated text (tab by default): a header row
``intervention`` followed by gene names, then one row per cell holding the
intervention label (``non-targeting`` for observational cells, otherwise a
gene name from the header) and the expression values. Edge-list files hold
``parent``, ``child`` and ``score`` columns in rank order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from grnbench.dataset import (
    OBSERVATIONAL,
    OBSERVATIONAL_LABEL,
    ExpressionDataset,
    RankedEdgeList,
)
from grnbench.validation import require

DELIMITER = "\t"


class DatasetFormatError(ValueError):
    """Malformed dataset or edge-list file; carries the offending location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        location = ""
        if line is not None:
            location = f" (line {line}"
            location += f", column {column})" if column is not None else ")"
        super().__init__(message + location)
        self.line = line
        self.column = column


def load_dataset(path) -> ExpressionDataset:
    """Parse a dataset file; gene order follows the header."""
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as handle:
        lines = handle.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DatasetFormatError(f"{path}: file is empty")

    header = lines[0].split(DELIMITER)
    if len(header) < 3 or header[0] != "intervention":
        raise DatasetFormatError(
            f"{path}: header must be 'intervention' followed by >= 2 gene names",
            line=1,
        )
    gene_names = header[1:]
    index_of = {name: i for i, name in enumerate(gene_names)}
    if len(index_of) != len(gene_names):
        raise DatasetFormatError(f"{path}: duplicate gene name in header", line=1)

    n_genes = len(gene_names)
    values = np.empty((len(lines) - 1, n_genes))
    labels = np.empty(len(lines) - 1, dtype=np.int64)
    for row, line in enumerate(lines[1:], start=2):
        fields = line.split(DELIMITER)
        if len(fields) != n_genes + 1:
            raise DatasetFormatError(
                f"{path}: expected {n_genes + 1} fields, found {len(fields)}",
                line=row,
            )
        label = fields[0]
        if label == OBSERVATIONAL_LABEL:
            labels[row - 2] = OBSERVATIONAL
        elif label in index_of:
            labels[row - 2] = index_of[label]
        else:
            raise DatasetFormatError(
                f"{path}: intervention label {label!r} is not a header gene",
                line=row,
                column=1,
            )
        for col, field in enumerate(fields[1:], start=2):
            try:
                values[row - 2, col - 2] = float(field)
            except ValueError:
                raise DatasetFormatError(
                    f"{path}: non-numeric value {field!r}", line=row, column=col
                ) from None
    return ExpressionDataset(values, tuple(gene_names), labels)


def save_dataset(data: ExpressionDataset, path) -> None:
    """Write a dataset file; values use shortest round-trip formatting."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(DELIMITER.join(["intervention", *data.gene_names]) + "\n")
        for row in range(data.n_cells):
            label = (
                OBSERVATIONAL_LABEL
                if data.interventions[row] == OBSERVATIONAL
                else data.gene_names[data.interventions[row]]
            )
            fields = [label] + [repr(float(v)) for v in data.values[row]]
            handle.write(DELIMITER.join(fields) + "\n")


def emit_edges(edges: RankedEdgeList, gene_names, path) -> None:
    """Write an edge list in rank order, scores at 12 significant digits."""
    gene_names = tuple(gene_names)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(DELIMITER.join(["parent", "child", "score"]) + "\n")
        for parent, child, score in edges:
            require(
                0 <= parent < len(gene_names) and 0 <= child < len(gene_names),
                "edge endpoint has no gene name",
            )
            handle.write(
                DELIMITER.join(
                    [gene_names[parent], gene_names[child], format(score, ".12g")]
                )
                + "\n"
            )


def load_edges(path, gene_names) -> RankedEdgeList:
    """Read an edge list, mapping gene names back onto column indices."""
    index_of = {name: i for i, name in enumerate(gene_names)}
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as handle:
        lines = handle.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].split(DELIMITER) != ["parent", "child", "score"]:
        raise DatasetFormatError(f"{path}: missing edge-list header", line=1)
    edges = []
    for row, line in enumerate(lines[1:], start=2):
        fields = line.split(DELIMITER)
        if len(fields) != 3:
            raise DatasetFormatError(
                f"{path}: expected 3 fields, found {len(fields)}", line=row
            )
        for col, name in ((1, fields[0]), (2, fields[1])):
            if name not in index_of:
                raise DatasetFormatError(
                    f"{path}: unknown gene {name!r}", line=row, column=col
                )
        try:
            score = float(fields[2])
        except ValueError:
            raise DatasetFormatError(
                f"{path}: non-numeric score {fields[2]!r}", line=row, column=3
            ) from None
        edges.append((index_of[fields[0]], index_of[fields[1]], score))
    return RankedEdgeList(tuple(edges))


def dump_report(report: dict, path=None) -> str:
    """Serialize a report deterministically; identical input, identical bytes."""
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_report(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
