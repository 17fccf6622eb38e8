"""Gradient-boosted regression trees with leaf-wise growth.

Supports squared-error regression and binary log-loss classification.
Trees are grown best-gain-first under a leaf budget and a depth cap, with
exact (sorted-scan) split search, per-node learned routing for missing
values, and total-gain feature importances. Fitting is deterministic:
there is no bagging or feature subsampling, and ties in the split search
always resolve to the lowest feature index and earliest threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from grnbench.validation import as_float_matrix, check_is_fitted, require

OBJECTIVES = ("squared_error", "binary_logloss")

_EPS_HESSIAN = 1e-16


@dataclass(frozen=True)
class GbmParams:
    """Boosting hyper-parameters.

    The defaults mirror a small-tree configuration commonly used for
    expression data: 5 leaves, depth 2, 1000 rounds at learning rate 0.05.
    """

    num_leaves: int = 5
    max_depth: int = 2
    min_data_in_leaf: int = 5
    learning_rate: float = 0.05
    min_gain_to_split: float = 0.01
    num_iterations: int = 1000
    objective: str = "squared_error"
    seed: int = 0

    def __post_init__(self):
        require(self.num_leaves >= 2, "num_leaves must be >= 2")
        require(self.max_depth >= 1, "max_depth must be >= 1")
        require(self.min_data_in_leaf >= 1, "min_data_in_leaf must be >= 1")
        require(self.learning_rate > 0.0, "learning_rate must be > 0")
        require(self.min_gain_to_split >= 0.0, "min_gain_to_split must be >= 0")
        require(self.num_iterations >= 1, "num_iterations must be >= 1")
        require(
            self.objective in OBJECTIVES,
            f"objective must be one of {OBJECTIVES}, got {self.objective!r}",
        )


@dataclass(frozen=True)
class Tree:
    """One regression tree as parallel node arrays; feature -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    missing_left: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    gain: np.ndarray
    depth: np.ndarray

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature < 0))

    def apply(self, features: np.ndarray) -> np.ndarray:
        """Leaf value for every row, routing NaN by the stored direction."""
        n = features.shape[0]
        node = np.zeros(n, dtype=np.int64)
        while True:
            feat = self.feature[node]
            active = feat >= 0
            if not np.any(active):
                break
            idx = np.nonzero(active)[0]
            x = features[idx, feat[active]]
            node_active = node[active]
            go_left = (x <= self.threshold[node_active]) | (
                np.isnan(x) & self.missing_left[node_active]
            )
            node[idx] = np.where(
                go_left, self.left[node_active], self.right[node_active]
            )
        return self.value[node]


@dataclass(frozen=True)
class GbmModel:
    trees: tuple[Tree, ...]
    base_score: float
    objective: str
    n_features: int
    params: GbmParams
    #: raw training scores at the end of fitting, kept for exactness checks
    fit_raw_scores: np.ndarray | None = None

    def raw_scores(self, features: np.ndarray) -> np.ndarray:
        scores = np.full(features.shape[0], self.base_score, dtype=np.float64)
        lr = self.params.learning_rate
        for tree in self.trees:
            scores += lr * tree.apply(features)
        return scores


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    expx = np.exp(x[~positive])
    out[~positive] = expx / (1.0 + expx)
    return out


@dataclass
class _Split:
    gain: float
    feature: int
    threshold: float
    missing_left: bool


def _midpoint(lo: float, hi: float) -> float:
    mid = 0.5 * (lo + hi)
    # adjacent floats can round the midpoint up to hi; keep lo on the left
    return lo if mid >= hi else mid


def _gain_terms(gl, hl, gr, hr, g_total, h_total):
    parent = g_total * g_total / max(h_total, _EPS_HESSIAN)
    return 0.5 * (
        gl * gl / np.maximum(hl, _EPS_HESSIAN)
        + gr * gr / np.maximum(hr, _EPS_HESSIAN)
        - parent
    )


def _scan_feature(
    x: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    min_data: int,
) -> tuple[float, float, bool] | None:
    """Best (gain, threshold, missing_left) for one feature within a node."""
    finite = ~np.isnan(x)
    n_missing = int(x.size - finite.sum())
    x_fin = x[finite]
    if x_fin.size == 0:
        return None
    order = np.argsort(x_fin, kind="stable")
    xs = x_fin[order]
    gs = g[finite][order]
    hs = h[finite][order]
    g_missing = float(g[~finite].sum())
    h_missing = float(h[~finite].sum())
    g_total = float(gs.sum()) + g_missing
    h_total = float(hs.sum()) + h_missing
    n_total = x.size

    best: tuple[float, float, bool] | None = None
    n_fin = xs.size
    if n_fin >= 2:
        gl = np.cumsum(gs)[:-1]
        hl = np.cumsum(hs)[:-1]
        counts = np.arange(1, n_fin, dtype=np.int64)
        distinct = xs[1:] > xs[:-1]

        for missing_left in (True, False):
            gl_opt = gl + g_missing if missing_left else gl
            hl_opt = hl + h_missing if missing_left else hl
            nl = counts + n_missing if missing_left else counts
            nr = n_total - nl
            valid = distinct & (nl >= min_data) & (nr >= min_data)
            if not np.any(valid):
                continue
            gains = _gain_terms(
                gl_opt, hl_opt, g_total - gl_opt, h_total - hl_opt, g_total, h_total
            )
            gains[~valid] = -np.inf
            t = int(np.argmax(gains))
            gain = float(gains[t])
            if best is None or gain > best[0]:
                best = (gain, _midpoint(float(xs[t]), float(xs[t + 1])), missing_left)
            if n_missing == 0:
                break  # both routings identical without missing rows

    if n_missing >= min_data and n_fin >= min_data:
        # boundary split: every finite value left, missing rows right
        gain = float(
            _gain_terms(
                g_total - g_missing,
                h_total - h_missing,
                g_missing,
                h_missing,
                g_total,
                h_total,
            )
        )
        if best is None or gain > best[0]:
            best = (gain, float(xs[-1]), False)
    return best


def _best_split_batch(
    features: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    min_data: int,
) -> _Split | None:
    """Split search across all columns at once; requires a NaN-free block."""
    n, n_features = features.shape
    if n < 2 * min_data:
        return None
    order = np.argsort(features, axis=0, kind="stable")
    xs = np.take_along_axis(features, order, axis=0)
    gs = g[order]
    hs = h[order]
    gl = np.cumsum(gs, axis=0)[:-1]
    hl = np.cumsum(hs, axis=0)[:-1]
    g_total = float(g.sum())
    h_total = float(h.sum())
    counts = np.arange(1, n, dtype=np.int64)[:, None]
    valid = (xs[1:] > xs[:-1]) & (counts >= min_data) & (n - counts >= min_data)
    if not np.any(valid):
        return None
    gains = _gain_terms(gl, hl, g_total - gl, h_total - hl, g_total, h_total)
    gains[~valid] = -np.inf
    rows = np.argmax(gains, axis=0)
    per_feature = gains[rows, np.arange(n_features)]
    best_f = int(np.argmax(per_feature))
    best_gain = float(per_feature[best_f])
    if not np.isfinite(best_gain):
        return None
    t = int(rows[best_f])
    threshold = _midpoint(float(xs[t, best_f]), float(xs[t + 1, best_f]))
    return _Split(best_gain, best_f, threshold, True)


def _best_split(
    features: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    min_data: int,
) -> _Split | None:
    if features.shape[0] < 2 * min_data:
        return None
    if not np.any(np.isnan(features)):
        return _best_split_batch(features, g, h, min_data)
    best: _Split | None = None
    for f in range(features.shape[1]):
        found = _scan_feature(features[:, f], g, h, min_data)
        if found is not None and (best is None or found[0] > best.gain):
            best = _Split(found[0], f, found[1], found[2])
    return best


class _TreeBuilder:
    """Grows a tree leaf-wise and tracks per-row leaf assignments."""

    def __init__(self, params: GbmParams):
        self.params = params
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.missing_left: list[bool] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.gain: list[float] = []
        self.depth: list[int] = []

    def _new_node(self, depth: int) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.missing_left.append(True)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        self.gain.append(0.0)
        self.depth.append(depth)
        return len(self.feature) - 1

    def grow(
        self, features: np.ndarray, g: np.ndarray, h: np.ndarray
    ) -> tuple[Tree, np.ndarray]:
        params = self.params
        root = self._new_node(0)
        rows_of = {root: np.arange(features.shape[0], dtype=np.int64)}
        candidates: dict[int, _Split] = {}

        def propose(node: int) -> None:
            if self.depth[node] >= params.max_depth:
                return
            rows = rows_of[node]
            split = _best_split(
                features[rows], g[rows], h[rows], params.min_data_in_leaf
            )
            if split is not None and split.gain >= params.min_gain_to_split:
                candidates[node] = split

        propose(root)
        n_leaves = 1
        while n_leaves < params.num_leaves and candidates:
            node = min(candidates, key=lambda k: (-candidates[k].gain, k))
            split = candidates.pop(node)
            rows = rows_of.pop(node)
            x = features[rows, split.feature]
            go_left = (x <= split.threshold) | (
                np.isnan(x) & split.missing_left
            )
            left_node = self._new_node(self.depth[node] + 1)
            right_node = self._new_node(self.depth[node] + 1)
            rows_of[left_node] = rows[go_left]
            rows_of[right_node] = rows[~go_left]
            self.feature[node] = split.feature
            self.threshold[node] = split.threshold
            self.missing_left[node] = split.missing_left
            self.left[node] = left_node
            self.right[node] = right_node
            self.gain[node] = split.gain
            n_leaves += 1
            propose(left_node)
            propose(right_node)

        assignment = np.empty(features.shape[0], dtype=np.int64)
        for node, rows in rows_of.items():
            g_sum = float(g[rows].sum())
            h_sum = float(h[rows].sum())
            self.value[node] = -g_sum / max(h_sum, _EPS_HESSIAN)
            assignment[rows] = node

        tree = Tree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            missing_left=np.asarray(self.missing_left, dtype=bool),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            value=np.asarray(self.value, dtype=np.float64),
            gain=np.asarray(self.gain, dtype=np.float64),
            depth=np.asarray(self.depth, dtype=np.int64),
        )
        return tree, assignment


def _gradients(
    objective: str, scores: np.ndarray, target: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    if objective == "squared_error":
        return scores - target, np.ones_like(scores)
    probs = _sigmoid(scores)
    return probs - target, probs * (1.0 - probs)


def fit_gbm(features, target, params: GbmParams) -> GbmModel:
    """Fit a boosted-tree model.

    Missing feature entries are accepted for binary_logloss only; a target
    with a single distinct value yields an intercept-only model.
    """
    allow_nan = params.objective == "binary_logloss"
    features = as_float_matrix(features, "features", allow_nan=allow_nan)
    target = np.asarray(target, dtype=np.float64)
    require(target.ndim == 1, "target must be 1-D")
    require(
        target.size == features.shape[0],
        f"row mismatch: {features.shape[0]} feature rows, {target.size} targets",
    )
    require(bool(np.all(np.isfinite(target))), "target must be finite")
    minimum_rows = max(2 * params.min_data_in_leaf, 2)
    require(
        features.shape[0] >= minimum_rows,
        f"need at least {minimum_rows} rows, got {features.shape[0]}",
    )
    if params.objective == "binary_logloss":
        require(
            bool(np.all((target == 0.0) | (target == 1.0))),
            "binary_logloss requires a 0/1 target",
        )

    if params.objective == "squared_error":
        base_score = float(target.mean())
    else:
        mean = min(max(float(target.mean()), 1e-12), 1.0 - 1e-12)
        base_score = float(np.log(mean / (1.0 - mean)))

    trees: list[Tree] = []
    scores = np.full(features.shape[0], base_score, dtype=np.float64)
    if not np.all(target == target[0]):
        for _ in range(params.num_iterations):
            g, h = _gradients(params.objective, scores, target)
            tree, assignment = _TreeBuilder(params).grow(features, g, h)
            if tree.n_leaves <= 1:
                break  # no split clears the gain bar; boosting has converged
            trees.append(tree)
            scores += params.learning_rate * tree.value[assignment]

    return GbmModel(
        tuple(trees),
        base_score,
        params.objective,
        features.shape[1],
        params,
        fit_raw_scores=scores,
    )


def predict_gbm(model: GbmModel, features) -> np.ndarray:
    """Model output per row: raw sums for regression, probability for binary."""
    features = as_float_matrix(features, "features", allow_nan=True)
    require(
        features.shape[1] == model.n_features,
        f"expected {model.n_features} features, got {features.shape[1]}",
    )
    scores = model.raw_scores(features)
    if model.objective == "binary_logloss":
        return _sigmoid(scores)
    return scores


def feature_importance(model: GbmModel) -> np.ndarray:
    """Total split gain per feature across every node of every tree."""
    importances = np.zeros(model.n_features, dtype=np.float64)
    for tree in model.trees:
        internal = tree.feature >= 0
        np.add.at(importances, tree.feature[internal], tree.gain[internal])
    return importances


class GradientBoosting(BaseEstimator):
    """Estimator facade over :func:`fit_gbm` with flat hyper-parameters."""

    def __init__(
        self,
        num_leaves: int = 5,
        max_depth: int = 2,
        min_data_in_leaf: int = 5,
        learning_rate: float = 0.05,
        min_gain_to_split: float = 0.01,
        num_iterations: int = 1000,
        objective: str = "squared_error",
        seed: int = 0,
    ):
        self.num_leaves = num_leaves
        self.max_depth = max_depth
        self.min_data_in_leaf = min_data_in_leaf
        self.learning_rate = learning_rate
        self.min_gain_to_split = min_gain_to_split
        self.num_iterations = num_iterations
        self.objective = objective
        self.seed = seed

    def _params(self) -> GbmParams:
        return GbmParams(
            num_leaves=self.num_leaves,
            max_depth=self.max_depth,
            min_data_in_leaf=self.min_data_in_leaf,
            learning_rate=self.learning_rate,
            min_gain_to_split=self.min_gain_to_split,
            num_iterations=self.num_iterations,
            objective=self.objective,
            seed=self.seed,
        )

    def fit(self, X, y):
        self.model_ = fit_gbm(X, y, self._params())
        self.feature_importances_ = feature_importance(self.model_)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "model_")
        return predict_gbm(self.model_, X)
