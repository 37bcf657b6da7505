"""Regression trees and a bootstrap-aggregated forest.

Trees are stored as flat parallel arrays (feature, threshold, left, right,
value) so a fitted model serializes to plain lists and predictions run as a
vectorized walk.  Split search minimizes the summed squared error of the two
sides, computed for every candidate position of every candidate feature in
one pass over prefix sums.
"""

import numpy as np

from .errors import EmptyDatasetError, InvalidConfigError

_LEAF = -1


def _best_split(X, y, min_leaf, feature_ids):
    """Return (feature, threshold, left_mask) for the lowest-SSE split of
    this node, or (None, None, None) when no position separates the data."""
    n = X.shape[0]
    cols = X[:, feature_ids]
    order = np.argsort(cols, axis=0, kind="stable")
    xs = np.take_along_axis(cols, order, axis=0)
    ys = y[order]

    csum = np.cumsum(ys, axis=0)
    csq = np.cumsum(ys * ys, axis=0)
    total_sum = csum[-1]
    total_sq = csq[-1]

    # candidate split after sorted position i: left has i+1 rows
    left_cnt = np.arange(1, n, dtype=float)[:, None]
    right_cnt = n - left_cnt
    lsum = csum[:-1]
    lsq = csq[:-1]
    cost = (lsq - lsum * lsum / left_cnt) \
        + ((total_sq - lsq) - (total_sum - lsum) ** 2 / right_cnt)

    invalid = xs[:-1] == xs[1:]
    if min_leaf > 1:
        pos = np.arange(1, n)[:, None]
        invalid = invalid | (pos < min_leaf) | (n - pos < min_leaf)
    cost = np.where(invalid, np.inf, cost)

    flat = np.argmin(cost)
    best_pos, best_col = np.unravel_index(flat, cost.shape)
    if not np.isfinite(cost[best_pos, best_col]):
        return None, None, None
    threshold = float((xs[best_pos, best_col] + xs[best_pos + 1, best_col]) / 2.0)
    feature = int(feature_ids[best_col])
    left_mask = X[:, feature] <= threshold
    return feature, threshold, left_mask


class RegressionTree:
    """A fitted tree; feature[i] == -1 marks node i as a leaf."""

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=float)

    @property
    def node_count(self):
        return len(self.feature)

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        idx = np.zeros(X.shape[0], dtype=np.int64)
        active = np.flatnonzero(self.feature[idx] != _LEAF)
        while active.size:
            nodes = idx[active]
            feats = self.feature[nodes]
            go_left = X[active, feats] <= self.threshold[nodes]
            idx[active] = np.where(go_left, self.left[nodes], self.right[nodes])
            active = active[self.feature[idx[active]] != _LEAF]
        return self.value[idx]

    def to_dict(self):
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["feature"], d["threshold"], d["left"], d["right"], d["value"])


def build_tree(X, y, max_depth, min_split, min_leaf, max_features, rng=None):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDatasetError("cannot fit a tree without rows")
    n_features = X.shape[1]
    k = max(1, min(n_features, int(round(max_features * n_features))))

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node():
        feature.append(_LEAF)
        threshold.append(0.0)
        left.append(_LEAF)
        right.append(_LEAF)
        value.append(0.0)
        return len(feature) - 1

    root = new_node()
    stack = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        nid, idx, depth = stack.pop()
        ys = y[idx]
        value[nid] = float(ys.mean())
        if depth >= max_depth or idx.size < min_split or np.all(ys == ys[0]):
            continue
        if k < n_features:
            cand = np.sort(rng.choice(n_features, size=k, replace=False))
        else:
            cand = np.arange(n_features)
        feat, thr, mask = _best_split(X[idx], ys, min_leaf, cand)
        if feat is None:
            continue
        feature[nid] = feat
        threshold[nid] = thr
        lid = new_node()
        rid = new_node()
        left[nid] = lid
        right[nid] = rid
        stack.append((lid, idx[mask], depth + 1))
        stack.append((rid, idx[~mask], depth + 1))
    return RegressionTree(feature, threshold, left, right, value)


class RandomForest:
    def __init__(self, trees):
        if not trees:
            raise InvalidConfigError("forest needs at least one tree")
        self.trees = list(trees)

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += tree.predict(X)
        return total / len(self.trees)

    def to_dict(self):
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d):
        return cls([RegressionTree.from_dict(t) for t in d["trees"]])


def fit_forest(X, y, n_trees, max_depth, min_split, min_leaf, max_features,
               master_seed=0):
    """Fit n_trees on bootstrap resamples.  Each tree draws its randomness
    from an independent child of the master seed, so adding trees never
    perturbs the ones already grown."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] == 0:
        raise EmptyDatasetError("cannot fit a forest without rows")
    n = X.shape[0]
    trees = []
    for i in range(n_trees):
        rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(i,)))
        boot = rng.integers(0, n, size=n)
        trees.append(build_tree(X[boot], y[boot], max_depth, min_split,
                                min_leaf, max_features, rng))
    return RandomForest(trees)
