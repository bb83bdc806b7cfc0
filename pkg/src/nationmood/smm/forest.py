"""Seeded random-forest classifier over the 136-feature vectors.

Member trees are greedy CART: at each node a random subset of features is
inspected and the split with the largest impurity decrease wins, ties broken
by lowest feature index then lowest threshold. Everything is driven by
numpy Generators seeded from one master seed, so (data, hyperparams, seed)
maps to a bit-identical forest.
"""

import heapq
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import FingerprintError, ValidationError

CLASSES = (-1, 0, 1)
# argmax ties resolve toward the class closer to 0, then the negative one
_TIE_ORDER = (1, 0, 2)  # column order: class 0 first, then -1, then +1
_TIE_CLASSES = np.array([0, -1, 1])


def gini(class_counts) -> float:
    """Gini impurity 1 - sum(p_i^2) of a count vector."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 0):
        raise ValidationError("negative class count")
    total = counts.sum()
    if total <= 0:
        raise ValidationError("gini of an empty node is undefined")
    p = counts / total
    return float(1.0 - np.sum(p * p))


def entropy(class_counts) -> float:
    """Shannon impurity (natural log) of a count vector."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 0):
        raise ValidationError("negative class count")
    total = counts.sum()
    if total <= 0:
        raise ValidationError("entropy of an empty node is undefined")
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log(p)))


def _impurity(counts: np.ndarray, criterion: str) -> float:
    return gini(counts) if criterion == "gini" else entropy(counts)


@dataclass(frozen=True)
class HyperParams:
    criterion: str = "gini"  # gini | entropy
    bootstrap: bool = True
    max_features: object = "sqrt"  # "sqrt" | "log2" | fraction in (0, 1]
    max_depth: int | None = None
    max_leaf_nodes: int | None = None
    n_estimators: int = 100
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def __post_init__(self):
        if self.criterion not in ("gini", "entropy"):
            raise ValidationError(f"criterion must be gini or entropy: {self.criterion!r}")
        if isinstance(self.max_features, str):
            if self.max_features not in ("sqrt", "log2"):
                raise ValidationError(f"max_features string must be sqrt or log2: {self.max_features!r}")
        elif not 0.0 < float(self.max_features) <= 1.0:
            raise ValidationError(f"max_features fraction must be in (0,1]: {self.max_features}")
        if self.min_samples_split < 2:
            raise ValidationError("min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise ValidationError("min_samples_leaf must be >= 1")
        if self.n_estimators < 1:
            raise ValidationError("n_estimators must be >= 1")

    def n_candidate_features(self, n_features: int) -> int:
        if self.max_features == "sqrt":
            return max(1, int(math.sqrt(n_features)))
        if self.max_features == "log2":
            return max(1, int(math.log2(n_features)))
        return max(1, int(float(self.max_features) * n_features))

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "bootstrap": self.bootstrap,
            "max_features": self.max_features,
            "max_depth": self.max_depth,
            "max_leaf_nodes": self.max_leaf_nodes,
            "n_estimators": self.n_estimators,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
        }

    @staticmethod
    def from_dict(d: dict) -> "HyperParams":
        return HyperParams(**d)


@dataclass
class Tree:
    """Flat-array CART: feature[i] == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, 3) class counts of the training samples
    importances: np.ndarray  # per-feature impurity decrease, summed

    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_distributions(self) -> np.ndarray:
        totals = self.counts.sum(axis=1, keepdims=True)
        return self.counts / np.maximum(totals, 1.0)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        for _ in range(self.n_nodes() + 1):
            feats = self.feature[node]
            internal = feats >= 0
            if not internal.any():
                break
            r = rows[internal]
            n = node[internal]
            go_left = X[r, self.feature[n]] <= self.threshold[n]
            node[r] = np.where(go_left, self.left[n], self.right[n])
        return node


def _xlogx(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    pos = a > 0
    out[pos] = a[pos] * np.log(a[pos])
    return out


def _best_split(Xs, oh, min_leaf, criterion):
    """Best (column, threshold, child counts) over the candidate columns.

    ``Xs`` holds the node's rows for the candidate features in ascending
    feature order; the scan is feature-major so the first maximum realizes
    the documented tie-break (lowest feature index, then lowest threshold).
    Returns None when no valid split exists.
    """
    n = Xs.shape[0]
    order = np.argsort(Xs, axis=0, kind="stable")
    vs = np.take_along_axis(Xs, order, axis=0)
    cum = np.cumsum(oh[order], axis=0)  # (n, k, 3)
    totals = cum[-1]  # (k, 3)

    nL = np.arange(1, n, dtype=np.float64)[:, None]  # (n-1, 1)
    nR = n - nL
    left = cum[:-1]
    right = totals[None, :, :] - left
    valid = (vs[:-1] < vs[1:]) & (nL >= min_leaf) & (nR >= min_leaf)
    if not valid.any():
        return None

    # maximizing either proxy minimizes the weighted child impurity
    if criterion == "gini":
        score = (left * left).sum(axis=2) / nL + (right * right).sum(axis=2) / nR
    else:
        score = (_xlogx(left).sum(axis=2) - _xlogx(nL)) + (_xlogx(right).sum(axis=2) - _xlogx(nR))
    score = np.where(valid, score, -np.inf)

    flat = np.argmax(score.T)  # feature-major
    kf, pos = divmod(flat, n - 1)
    lo, hi = vs[pos, kf], vs[pos + 1, kf]
    thr = lo + (hi - lo) / 2.0
    if thr >= hi:  # float midpoint collapse guard
        thr = lo
    return int(kf), float(thr), left[pos, kf].copy(), right[pos, kf].copy()


class _TreeBuilder:
    def __init__(self, X, y_idx, hp: HyperParams, rng: np.random.Generator):
        self.X = X
        self.y_onehot = np.eye(3, dtype=np.float64)[y_idx]
        self.hp = hp
        self.rng = rng
        self.k = hp.n_candidate_features(X.shape[1])
        self.feature: list = []
        self.threshold: list = []
        self.left: list = []
        self.right: list = []
        self.counts: list = []
        self.importances = np.zeros(X.shape[1], dtype=np.float64)
        self.n_root = X.shape[0]

    def _new_node(self, counts) -> int:
        self.feature.append(-1)
        self.threshold.append(math.nan)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append(counts)
        return len(self.feature) - 1

    def _evaluate(self, idx, depth, node_counts):
        """Candidate split for one node, or None if it must stay a leaf."""
        hp = self.hp
        n = idx.shape[0]
        if n < hp.min_samples_split or n < 2 * hp.min_samples_leaf:
            return None
        if hp.max_depth is not None and depth >= hp.max_depth:
            return None
        if np.count_nonzero(node_counts) < 2:
            return None
        feats = np.sort(self.rng.choice(self.X.shape[1], size=self.k, replace=False))
        Xs = self.X[idx[:, None], feats[None, :]]
        found = _best_split(Xs, self.y_onehot[idx], hp.min_samples_leaf, hp.criterion)
        if found is None:
            return None
        kf, thr, cL, cR = found
        f = int(feats[kf])
        imp = _impurity(node_counts, hp.criterion)
        nL, nR = cL.sum(), cR.sum()
        gain = imp - (nL * _impurity(cL, hp.criterion) + nR * _impurity(cR, hp.criterion)) / n
        if gain <= 0.0:
            return None
        return f, thr, cL, cR, gain

    def _apply_split(self, node_id, idx, split):
        f, thr, cL, cR, gain = split
        go_left = self.X[idx, f] <= thr
        idx_l, idx_r = idx[go_left], idx[~go_left]
        self.feature[node_id] = f
        self.threshold[node_id] = thr
        self.importances[f] += (idx.shape[0] / self.n_root) * gain
        left_id = self._new_node(cL)
        right_id = self._new_node(cR)
        self.left[node_id] = left_id
        self.right[node_id] = right_id
        return (left_id, idx_l), (right_id, idx_r)

    def build(self) -> Tree:
        root_counts = self.y_onehot.sum(axis=0)
        root = self._new_node(root_counts)
        idx0 = np.arange(self.X.shape[0], dtype=np.int64)
        if self.hp.max_leaf_nodes is not None:
            self._grow_best_first(root, idx0, root_counts)
        else:
            self._grow_depth_first(root, idx0, root_counts)
        return Tree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            counts=np.vstack(self.counts),
            importances=self.importances,
        )

    def _grow_depth_first(self, root, idx0, root_counts):
        stack = [(root, idx0, 0, root_counts)]
        while stack:
            node_id, idx, depth, counts = stack.pop()
            split = self._evaluate(idx, depth, counts)
            if split is None:
                continue
            (lid, lidx), (rid, ridx) = self._apply_split(node_id, idx, split)
            # push right first so the left child is processed next (preorder)
            stack.append((rid, ridx, depth + 1, split[3]))
            stack.append((lid, lidx, depth + 1, split[2]))

    def _grow_best_first(self, root, idx0, root_counts):
        """Split the frontier leaf with the largest total impurity reduction."""
        seq = 0
        heap = []
        split = self._evaluate(idx0, 0, root_counts)
        if split is not None:
            heapq.heappush(heap, (-split[4] * idx0.shape[0], seq, root, idx0, 0, split))
        leaves = 1
        while heap and leaves < self.hp.max_leaf_nodes:
            _, _, node_id, idx, depth, split = heapq.heappop(heap)
            (lid, lidx), (rid, ridx) = self._apply_split(node_id, idx, split)
            leaves += 1
            for cid, cidx, ccounts in ((lid, lidx, split[2]), (rid, ridx, split[3])):
                csplit = self._evaluate(cidx, depth + 1, ccounts)
                if csplit is not None:
                    seq += 1
                    heapq.heappush(
                        heap, (-csplit[4] * cidx.shape[0], seq, cid, cidx, depth + 1, csplit)
                    )


def train_tree(X, y, hp: HyperParams, rng: np.random.Generator) -> Tree:
    """One CART on a bootstrap sample (when hp.bootstrap) of (X, y)."""
    y_idx = class_indices(y)
    if hp.bootstrap:
        idx = rng.integers(0, X.shape[0], size=X.shape[0])
        X, y_idx = X[idx], y_idx[idx]
    return _TreeBuilder(X, y_idx, hp, rng).build()


def class_indices(y) -> np.ndarray:
    """Map labels in {-1, 0, +1} to column indices 0..2."""
    y = np.asarray(y)
    if not np.isin(y, CLASSES).all():
        raise ValidationError(f"labels must be in {CLASSES}")
    return (y + 1).astype(np.int64)


@dataclass
class SensorMoodModel:
    """Trained forest plus everything needed to apply it elsewhere."""

    trees: list
    hp: HyperParams
    seed: int
    registry_fingerprint: str
    medians: np.ndarray | None = None  # training imputation medians
    n_features: int = 136
    warnings: list = field(default_factory=list)

    def predict_proba(self, X, registry_fingerprint=None) -> np.ndarray:
        X = self._check(X, registry_fingerprint)
        acc = np.zeros((X.shape[0], 3), dtype=np.float64)
        for tree in self.trees:
            acc += tree.leaf_distributions()[tree.apply(X)]
        return acc / len(self.trees)

    def predict(self, X, registry_fingerprint=None):
        proba = self.predict_proba(X, registry_fingerprint)
        pref = proba[:, list(_TIE_ORDER)]
        return _TIE_CLASSES[np.argmax(pref, axis=1)]

    def _check(self, X, registry_fingerprint) -> np.ndarray:
        if registry_fingerprint is not None and registry_fingerprint != self.registry_fingerprint:
            raise FingerprintError(
                "feature registry fingerprint does not match the model's "
                f"({registry_fingerprint[:12]}... != {self.registry_fingerprint[:12]}...)"
            )
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise ValidationError(f"expected {self.n_features} features, got {X.shape[1]}")
        if np.isnan(X).any():
            raise ValidationError("feature matrix contains NaN; impute before predicting")
        return X


def train_smm(X, y, hp: HyperParams, seed: int, registry_fingerprint: str,
              medians=None) -> SensorMoodModel:
    """Train the forest; per-tree generators are spawned from the master seed."""
    X = np.asarray(X, dtype=np.float64)
    if np.isnan(X).any():
        raise ValidationError("training matrix contains NaN; impute first")
    children = np.random.SeedSequence(seed).spawn(hp.n_estimators)
    trees = [train_tree(X, y, hp, np.random.Generator(np.random.PCG64(c))) for c in children]
    return SensorMoodModel(
        trees=trees,
        hp=hp,
        seed=seed,
        registry_fingerprint=registry_fingerprint,
        medians=None if medians is None else np.asarray(medians, dtype=np.float64),
        n_features=X.shape[1],
    )


def feature_importance(model: SensorMoodModel, registry=None):
    """Mean impurity decrease per feature, normalized to sum 1.

    Returns (name, score) pairs in descending score order; ties keep registry
    (index) order. Without a registry, names are ``f<index>``.
    """
    total = np.zeros(model.n_features, dtype=np.float64)
    for tree in model.trees:
        total += tree.importances
    total /= len(model.trees)
    s = total.sum()
    if s > 0:
        total = total / s
    names = list(registry.names) if registry is not None else [f"f{i}" for i in range(model.n_features)]
    order = sorted(range(model.n_features), key=lambda i: (-total[i], i))
    return [(names[i], float(total[i])) for i in order]


# ---------------------------------------------------------------------------
# portable serialization

_FORMAT_VERSION = 1


def model_to_json(model: SensorMoodModel, path) -> None:
    doc = {
        "format": "nationmood-smm",
        "version": _FORMAT_VERSION,
        "hyperparams": model.hp.to_dict(),
        "seed": model.seed,
        "registry_fingerprint": model.registry_fingerprint,
        "n_features": model.n_features,
        "medians": None if model.medians is None else [float(v) for v in model.medians],
        "warnings": model.warnings,
        "trees": [
            {
                "feature": t.feature.tolist(),
                "threshold": [None if math.isnan(v) else v for v in t.threshold.tolist()],
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "counts": t.counts.tolist(),
                "importances": t.importances.tolist(),
            }
            for t in model.trees
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


def model_from_json(path) -> SensorMoodModel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "nationmood-smm" or doc.get("version") != _FORMAT_VERSION:
        raise ValidationError(f"{path}: not a supported sensor-model file")
    trees = [
        Tree(
            feature=np.asarray(t["feature"], dtype=np.int64),
            threshold=np.asarray(
                [math.nan if v is None else v for v in t["threshold"]], dtype=np.float64
            ),
            left=np.asarray(t["left"], dtype=np.int64),
            right=np.asarray(t["right"], dtype=np.int64),
            counts=np.asarray(t["counts"], dtype=np.float64),
            importances=np.asarray(t["importances"], dtype=np.float64),
        )
        for t in doc["trees"]
    ]
    return SensorMoodModel(
        trees=trees,
        hp=HyperParams.from_dict(doc["hyperparams"]),
        seed=doc["seed"],
        registry_fingerprint=doc["registry_fingerprint"],
        medians=None if doc["medians"] is None else np.asarray(doc["medians"], dtype=np.float64),
        n_features=doc["n_features"],
        warnings=list(doc.get("warnings", [])),
    )
