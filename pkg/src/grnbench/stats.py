"""Nonparametric statistical primitives.

All functions are pure, operate on 1-D samples or 2-D matrices, and are
implemented directly on sorted arrays so that small-instance behavior can
be checked against enumeration oracles.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import NamedTuple

import numpy as np

from grnbench.validation import ValidationError, as_sample, require


class TestResult(NamedTuple):
    statistic: float
    p_value: float


def wasserstein1(a, b) -> float:
    """Exact first Wasserstein distance between two empirical distributions.

    Integrates |F_a - F_b| over the merged sorted support, which handles
    unequal sample sizes exactly. Symmetric, zero iff the empirical
    distributions coincide.
    """
    a = np.sort(as_sample(a, "a"))
    b = np.sort(as_sample(b, "b"))
    support = np.concatenate([a, b])
    support.sort(kind="mergesort")
    deltas = np.diff(support)
    if deltas.size == 0:
        return 0.0
    cdf_a = np.searchsorted(a, support[:-1], side="right") / a.size
    cdf_b = np.searchsorted(b, support[:-1], side="right") / b.size
    return float(np.sum(np.abs(cdf_a - cdf_b) * deltas))


def _midranks(pooled_sorted: np.ndarray) -> np.ndarray:
    """Average ranks (1-based) of a sorted array, ties sharing their mean rank."""
    n = pooled_sorted.size
    ranks = np.arange(1, n + 1, dtype=np.float64)
    # group boundaries of tied runs
    boundaries = np.flatnonzero(np.diff(pooled_sorted) != 0) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [n]])
    for s, e in zip(starts, ends):
        if e - s > 1:
            ranks[s:e] = 0.5 * (s + 1 + e)
    return ranks


def _u_statistic(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    """U for sample a (pairs with a > b, ties counting 0.5) and tie sizes."""
    pooled = np.concatenate([a, b])
    order = np.argsort(pooled, kind="mergesort")
    pooled_sorted = pooled[order]
    ranks_sorted = _midranks(pooled_sorted)
    ranks = np.empty_like(ranks_sorted)
    ranks[order] = ranks_sorted
    rank_sum_a = float(np.sum(ranks[: a.size]))
    u = rank_sum_a - a.size * (a.size + 1) / 2.0
    _, counts = np.unique(pooled_sorted, return_counts=True)
    return u, counts.astype(np.float64)


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _mwu_exact_p(a: np.ndarray, b: np.ndarray, u_observed: float) -> float:
    """Two-sided p by enumerating every assignment of pooled values to group a."""
    pooled = np.sort(np.concatenate([a, b]), kind="mergesort")
    ranks = _midranks(pooled).tolist()
    n_a = a.size
    offset = n_a * (n_a + 1) / 2.0
    total = 0
    at_most = 0
    at_least = 0
    eps = 1e-9
    for subset in combinations(range(len(ranks)), n_a):
        u = sum(ranks[i] for i in subset) - offset
        total += 1
        if u <= u_observed + eps:
            at_most += 1
        if u >= u_observed - eps:
            at_least += 1
    p = 2.0 * min(at_most, at_least) / total
    return min(1.0, p)


def mann_whitney_u_two_sided(a, b, method: str = "auto") -> TestResult:
    """Two-sided Mann-Whitney U rank test.

    The statistic is U for sample ``a``: the number of (a, b) pairs with the
    a-value greater, ties counting 0.5. ``method`` selects the p-value
    computation: "normal" uses the tie-corrected normal approximation with
    continuity correction, "exact" enumerates all group assignments
    (total size <= 20), and "auto" picks exact for small samples.
    """
    a = as_sample(a, "a")
    b = as_sample(b, "b")
    n_a, n_b = a.size, b.size
    total = n_a + n_b
    u, tie_counts = _u_statistic(a, b)

    if method not in ("auto", "exact", "normal"):
        raise ValidationError(f"unknown method {method!r}")
    if method == "exact" and total > 20:
        raise ValidationError("exact enumeration is limited to total size <= 20")
    use_exact = method == "exact" or (method == "auto" and total <= 20)

    if use_exact:
        return TestResult(u, _mwu_exact_p(a, b, u))

    mean = n_a * n_b / 2.0
    tie_term = float(np.sum(tie_counts**3 - tie_counts)) / (total * (total - 1))
    variance = n_a * n_b / 12.0 * ((total + 1) - tie_term)
    if variance <= 0.0:
        # every pooled value identical: no evidence either way
        return TestResult(u, 1.0)
    z = (abs(u - mean) - 0.5) / math.sqrt(variance)
    p = 2.0 * _normal_sf(z)
    return TestResult(u, min(1.0, max(0.0, p)))


def _kolmogorov_sf(t: float) -> float:
    """Survival function of the Kolmogorov distribution.

    Uses the alternating series for large arguments and the Jacobi-theta
    form for small ones; both truncated once terms fall below 1e-12.
    """
    if t <= 0.0:
        return 1.0
    if t < 1.0:
        scale = math.pi * math.pi / (8.0 * t * t)
        total = 0.0
        k = 1
        while True:
            term = math.exp(-scale * k * k)
            total += term
            if term < 1e-12 or k > 99:
                break
            k += 2
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / t * total))
    total = 0.0
    sign = 1.0
    k = 1
    while True:
        term = 2.0 * math.exp(-2.0 * k * k * t * t)
        total += sign * term
        if term < 1e-12 or k > 99:
            break
        sign = -sign
        k += 1
    return min(1.0, max(0.0, total))


def ks_two_sample(a, b) -> TestResult:
    """Two-sample Kolmogorov-Smirnov test.

    The statistic is the supremum distance between the two empirical CDFs;
    the p-value comes from the asymptotic Kolmogorov distribution at
    effective size n_e = |a||b| / (|a| + |b|).
    """
    a = np.sort(as_sample(a, "a"))
    b = np.sort(as_sample(b, "b"))
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    statistic = float(np.max(np.abs(cdf_a - cdf_b)))
    effective = a.size * b.size / (a.size + b.size)
    p = _kolmogorov_sf(math.sqrt(effective) * statistic)
    return TestResult(statistic, p)


def benjamini_hochberg(p_values) -> np.ndarray:
    """Step-up false-discovery-rate adjustment, returned in input order.

    ``adjusted[i]`` is the smallest value of ``p_(j) * m / j`` over ranks at
    or above the rank of ``p_values[i]``, clamped at 1.
    """
    p = np.asarray(p_values, dtype=np.float64)
    require(p.ndim == 1, "p-values must be a 1-D sequence")
    require(p.size >= 1, "at least one p-value is required")
    require(
        bool(np.all((p >= 0.0) & (p <= 1.0))), "p-values must lie in [0, 1]"
    )
    m = p.size
    order = np.argsort(p, kind="mergesort")
    scaled = p[order] * m / np.arange(1, m + 1, dtype=np.float64)
    adjusted_sorted = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted_sorted = np.minimum(adjusted_sorted, 1.0)
    out = np.empty(m, dtype=np.float64)
    out[order] = adjusted_sorted
    return out


def pearson(x, y) -> float:
    """Sample Pearson correlation; 0 when either input has zero variance."""
    x = as_sample(x, "x")
    y = as_sample(y, "y")
    require(x.size == y.size, f"length mismatch: {x.size} vs {y.size}")
    require(x.size >= 2, "need at least 2 paired observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        return 0.0
    r = float(np.dot(dx, dy)) / (sx * sy)
    return min(1.0, max(-1.0, r))


def zscore_rows(values) -> np.ndarray:
    """Normalize each row to mean 0 and population standard deviation 1.

    Constant rows map to all-zero rows.
    """
    matrix = np.asarray(values, dtype=np.float64)
    require(matrix.ndim == 2, "expected a 2-D matrix")
    require(matrix.size > 0, "matrix must be non-empty")
    require(bool(np.all(np.isfinite(matrix))), "matrix must be finite")
    means = matrix.mean(axis=1, keepdims=True)
    stds = matrix.std(axis=1, keepdims=True)
    centered = matrix - means
    safe = np.where(stds == 0.0, 1.0, stds)
    out = centered / safe
    out[np.broadcast_to(stds == 0.0, out.shape)] = 0.0
    return out
