"""Gradient-boosted regression trees with squared-error loss.

Plain gradient boosting: the model starts from the target mean and each
stage fits a depth-limited regression tree to the current residuals by
greedy variance-reduction splitting. Candidate thresholds are midpoints
of adjacent distinct sorted feature values, leaves predict the mean
residual, and equal-gain ties break toward the lowest feature index and
then the lowest threshold, so a fit is fully deterministic.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFiniteInput, TooFewRows

N_ESTIMATORS_GRID = (50, 100, 200)
LEARNING_RATE_GRID = (0.01, 0.1, 0.2)
MAX_DEPTH_GRID = (3, 5, 7)

_LEAF = -1


@dataclass(frozen=True)
class GbtParams:
    n_estimators: int
    learning_rate: float
    max_depth: int
    min_samples_leaf: int = 1
    loss: str = "squared-error"

    def __post_init__(self):
        if self.n_estimators < 1:
            raise ValueError(f"n_estimators must be >= 1, got {self.n_estimators}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise ValueError(f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}")
        if self.loss != "squared-error":
            raise ValueError(f"only squared-error loss is supported, got {self.loss!r}")


DEFAULT_BEST_PARAMS = GbtParams(n_estimators=200, learning_rate=0.1, max_depth=5)


def default_param_grid() -> list[GbtParams]:
    """The stock 3x3x3 tuning grid (27 combinations)."""
    return [
        GbtParams(n_estimators=n, learning_rate=lr, max_depth=d)
        for n in N_ESTIMATORS_GRID
        for lr in LEARNING_RATE_GRID
        for d in MAX_DEPTH_GRID
    ]


@dataclass
class RegressionTree:
    """Binary axis-aligned tree stored as parallel node arrays.

    Node 0 is the root; nodes are laid out in preorder. Leaves have
    feature == -1. Rows with x[feature] <= threshold go left.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        idx = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feat = self.feature[idx]
            active = feat >= 0
            if not active.any():
                break
            rows = np.nonzero(active)[0]
            node = idx[rows]
            go_left = X[rows, feat[rows]] <= self.threshold[node]
            idx[rows] = np.where(go_left, self.left[node], self.right[node])
        return self.value[idx]

    def depth(self) -> int:
        def walk(node: int) -> int:
            if self.feature[node] == _LEAF:
                return 0
            return 1 + max(walk(self.left[node]), walk(self.right[node]))

        return walk(0)


class _TreeBuilder:
    """Grows one tree on presorted feature columns.

    Each node receives its own (n_node, d) matrix of row indices, column c
    holding the node's rows sorted by feature c; children matrices are
    carved out by boolean masking, so membership filtering stays O(n * d)
    per level without re-sorting.
    """

    def __init__(self, X, residuals, max_depth, min_samples_leaf):
        self.X = X
        self.r = residuals
        self.max_depth = max_depth
        self.min_leaf = min_samples_leaf
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.train_pred = np.empty(X.shape[0], dtype=np.float64)

    def _new_node(self, mean_value: float) -> int:
        node = len(self.feature)
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.value.append(mean_value)
        return node

    def build(self, sorted_idx: np.ndarray, depth: int) -> int:
        rows = sorted_idx[:, 0]
        n = rows.shape[0]
        r_node = self.r[rows]
        total = float(r_node.sum())
        mean = total / n
        node = self._new_node(mean)

        if (
            depth >= self.max_depth
            or n < 2 * self.min_leaf
            or r_node.max() == r_node.min()
        ):
            self.train_pred[rows] = mean
            return node

        split = self._best_split(sorted_idx, total)
        if split is None:
            self.train_pred[rows] = mean
            return node

        col, pos, thr = split
        is_left = np.zeros(self.X.shape[0], dtype=bool)
        is_left[sorted_idx[:pos, col]] = True
        mask = is_left[sorted_idx]
        d = sorted_idx.shape[1]
        left_idx = sorted_idx.T[mask.T].reshape(d, pos).T
        right_idx = sorted_idx.T[~mask.T].reshape(d, n - pos).T

        self.feature[node] = col
        self.threshold[node] = thr
        self.left[node] = self.build(left_idx, depth + 1)
        self.right[node] = self.build(right_idx, depth + 1)
        return node

    def _best_split(self, sorted_idx, total):
        """Best (feature, split position, threshold) by variance reduction.

        Gain at split position i (left = first i sorted rows) is
        sum_L^2/n_L + sum_R^2/n_R - sum^2/n; SSE terms independent of the
        split cancel. Returns None when no split has positive gain.
        """
        n, d = sorted_idx.shape
        cols = np.arange(d)
        Xs = self.X[sorted_idx, cols]           # (n, d) values, column-sorted
        rs = self.r[sorted_idx]                 # residuals in the same order
        csum = rs.cumsum(axis=0)

        n_left = np.arange(1, n, dtype=np.float64)[:, None]
        sum_left = csum[:-1, :]
        sum_right = total - sum_left
        gain = (
            sum_left * sum_left / n_left
            + sum_right * sum_right / (n - n_left)
            - total * total / n
        )

        valid = Xs[:-1, :] != Xs[1:, :]
        if self.min_leaf > 1:
            k = self.min_leaf
            valid[: k - 1, :] = False
            valid[n - k :, :] = False  # noqa: E203
        gain = np.where(valid, gain, -np.inf)

        best = gain.max()
        if not (best > 0.0):
            return None
        # tie-break: lowest feature index, then lowest threshold (for a
        # sorted column, lower split position means lower threshold)
        hit_rows, hit_cols = np.nonzero(gain == best)
        order = np.lexsort((hit_rows, hit_cols))
        row = int(hit_rows[order[0]])
        col = int(hit_cols[order[0]])
        pos = row + 1
        thr = (Xs[row, col] + Xs[row + 1, col]) / 2.0
        return col, pos, float(thr)


def _fit_tree(X, residuals, order, max_depth, min_samples_leaf):
    builder = _TreeBuilder(X, residuals, max_depth, min_samples_leaf)
    builder.build(order, 0)
    tree = RegressionTree(
        feature=np.asarray(builder.feature, dtype=np.int32),
        threshold=np.asarray(builder.threshold, dtype=np.float64),
        left=np.asarray(builder.left, dtype=np.int32),
        right=np.asarray(builder.right, dtype=np.int32),
        value=np.asarray(builder.value, dtype=np.float64),
    )
    return tree, builder.train_pred


@dataclass
class GbtModel:
    base_prediction: float
    trees: list[RegressionTree]
    params: GbtParams
    n_features: int = field(default=0)


def fit_gbt(X, y, params: GbtParams, seed: int = 0) -> GbtModel:
    """Fit a boosted-tree regressor to (X, y).

    Deterministic for fixed (X, y, params, seed); the greedy builder has
    no stochastic choices, so `seed` is accepted only for interface
    stability.
    """
    del seed
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"X must be 2-D, got ndim={X.ndim}")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise DimensionMismatch(f"y length {y.shape} does not match {X.shape[0]} rows")
    if X.shape[0] < 2:
        raise TooFewRows(f"need at least 2 rows, got {X.shape[0]}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise NonFiniteInput("training data contains NaN or infinity")

    order = np.argsort(X, axis=0, kind="stable").astype(np.intp)
    base = float(y.mean())
    pred = np.full(y.shape[0], base, dtype=np.float64)
    trees: list[RegressionTree] = []
    for _ in range(params.n_estimators):
        residuals = y - pred
        tree, tree_pred = _fit_tree(X, residuals, order, params.max_depth,
                                    params.min_samples_leaf)
        pred += params.learning_rate * tree_pred
        trees.append(tree)
    return GbtModel(base_prediction=base, trees=trees, params=params,
                    n_features=X.shape[1])


def predict_gbt(model: GbtModel, x) -> float:
    """Prediction for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.n_features:
        raise DimensionMismatch(
            f"vector length {x.shape} does not match {model.n_features} features"
        )
    return float(predict_gbt_matrix(model, x[None, :])[0])


def predict_gbt_matrix(model: GbtModel, X) -> np.ndarray:
    """Predictions for a feature matrix, one row per sample."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"matrix shape {X.shape} does not match {model.n_features} features"
        )
    out = np.full(X.shape[0], model.base_prediction, dtype=np.float64)
    for tree in model.trees:
        out += model.params.learning_rate * tree.predict(X)
    return out


def staged_mse(model: GbtModel, X, y) -> list[float]:
    """Training MSE after the base prediction and after each boosting stage."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    pred = np.full(y.shape[0], model.base_prediction, dtype=np.float64)
    curve = [float(np.mean((y - pred) ** 2))]
    for tree in model.trees:
        pred += model.params.learning_rate * tree.predict(X)
        curve.append(float(np.mean((y - pred) ** 2)))
    return curve
