"""Cross-validation, the metric report, and seeded hyperparameter search."""

import csv
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from .forest import CLASSES, HyperParams, class_indices, train_smm


def confusion_matrix(y_true, y_pred) -> np.ndarray:
    """3x3 matrix, rows = true class, columns = predicted class."""
    ti = class_indices(y_true)
    pi = class_indices(y_pred)
    m = np.zeros((3, 3), dtype=np.int64)
    np.add.at(m, (ti, pi), 1)
    return m


def _prf(matrix: np.ndarray, c: int) -> tuple:
    tp = matrix[c, c]
    fp = matrix[:, c].sum() - tp
    fn = matrix[c, :].sum() - tp
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return float(precision), float(recall), float(f1), int(matrix[c, :].sum())


@dataclass
class CVReport:
    """Pooled k-fold metrics in the usual per-class + averages layout."""

    per_class: dict  # class -> {precision, recall, f1, support}
    accuracy: float
    micro: dict  # precision/recall/f1 from pooled counts
    macro: dict  # unweighted means over the three classes
    folds: int
    seed: int
    confusion: list  # 3x3 row-major, true x predicted
    warnings: list = field(default_factory=list)

    @property
    def macro_f1(self) -> float:
        return self.macro["f1"]

    def to_text(self) -> str:
        lines = ["label  precision  recall  f1-score  support"]
        for c in CLASSES:
            m = self.per_class[c]
            lines.append(
                f"{c:>5}  {m['precision']:9.3f}  {m['recall']:6.3f}  {m['f1']:8.3f}  {m['support']:7d}"
            )
        lines.append(
            f"micro  {self.micro['precision']:9.3f}  {self.micro['recall']:6.3f}  {self.micro['f1']:8.3f}"
        )
        lines.append(
            f"macro  {self.macro['precision']:9.3f}  {self.macro['recall']:6.3f}  {self.macro['f1']:8.3f}"
        )
        lines.append(f"accuracy {self.accuracy:.4f}  folds {self.folds}  seed {self.seed}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["label", "precision", "recall", "f1", "support"])
            for c in CLASSES:
                m = self.per_class[c]
                writer.writerow([c, m["precision"], m["recall"], m["f1"], m["support"]])
            writer.writerow(["micro", self.micro["precision"], self.micro["recall"], self.micro["f1"], ""])
            writer.writerow(["macro", self.macro["precision"], self.macro["recall"], self.macro["f1"], ""])
            writer.writerow(["accuracy", self.accuracy, "", "", ""])


def report_from_predictions(y_true, y_pred, folds: int, seed: int) -> CVReport:
    matrix = confusion_matrix(y_true, y_pred)
    per_class = {}
    warnings = []
    for ci, c in enumerate(CLASSES):
        p, r, f1, support = _prf(matrix, ci)
        per_class[c] = {"precision": p, "recall": r, "f1": f1, "support": support}
        if support == 0:
            warnings.append(f"class {c} absent from evaluation data; metrics reported as 0")
    total = matrix.sum()
    tp_total = np.trace(matrix)
    accuracy = float(tp_total / total) if total else 0.0
    micro = {"precision": accuracy, "recall": accuracy, "f1": accuracy}
    macro = {
        k: float(np.mean([per_class[c][k] for c in CLASSES])) for k in ("precision", "recall", "f1")
    }
    return CVReport(
        per_class=per_class,
        accuracy=accuracy,
        micro=micro,
        macro=macro,
        folds=folds,
        seed=seed,
        confusion=matrix.tolist(),
        warnings=warnings,
    )


def macro_f1_of(per_class_f1s) -> float:
    """Unweighted mean of per-class F1 scores."""
    return float(np.mean(per_class_f1s))


def stratified_folds(y, k: int, rng: np.random.Generator) -> np.ndarray:
    """fold id per example: per-class shuffle, then round-robin assignment."""
    y = np.asarray(y)
    fold = np.full(len(y), -1, dtype=np.int64)
    for c in np.unique(y):
        idx = np.flatnonzero(y == c)
        idx = idx[rng.permutation(len(idx))]
        fold[idx] = np.arange(len(idx)) % k
    return fold


def user_folds(users, k: int, rng: np.random.Generator) -> np.ndarray:
    """fold id per example such that each user's examples share a fold."""
    users = np.asarray(users)
    uniq = np.unique(users)
    uniq = uniq[rng.permutation(len(uniq))]
    user_fold = {u: i % k for i, u in enumerate(uniq)}
    return np.asarray([user_fold[u] for u in users], dtype=np.int64)


def cross_validate(
    X,
    y,
    hp: HyperParams,
    k: int = 5,
    seed: int = 0,
    sources=None,
    users=None,
    user_disjoint: bool = False,
) -> CVReport:
    """Stratified k-fold CV with pooled predictions.

    Only self-reported examples are eligible for evaluation folds; examples
    with ``sources[i] == "smm_predicted"`` always stay in the training side.
    ``user_disjoint=True`` switches to user-level folds.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    n = len(y)
    if sources is None:
        eval_mask = np.ones(n, dtype=bool)
    else:
        eval_mask = np.asarray([s == "self_report" for s in sources], dtype=bool)
    n_eval = int(eval_mask.sum())
    if n_eval < k:
        raise ValidationError(f"need at least k={k} evaluable examples, got {n_eval}")
    if len(np.unique(y[eval_mask])) < 2:
        raise ValidationError("cross-validation needs at least 2 classes")

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    eval_idx = np.flatnonzero(eval_mask)
    if user_disjoint:
        if users is None:
            raise ValidationError("user_disjoint folds need the users array")
        fold = user_folds(np.asarray(users)[eval_idx], k, rng)
    else:
        fold = stratified_folds(y[eval_idx], k, rng)

    fold_seeds = np.random.SeedSequence(seed).spawn(k)
    y_true_pool = []
    y_pred_pool = []
    for f in range(k):
        test_idx = eval_idx[fold == f]
        if len(test_idx) == 0:
            continue
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        model = train_smm(
            X[train_mask],
            y[train_mask],
            hp,
            seed=int(fold_seeds[f].generate_state(1)[0]),
            registry_fingerprint="cv-internal",
        )
        y_true_pool.append(y[test_idx])
        y_pred_pool.append(model.predict(X[test_idx]))
    return report_from_predictions(
        np.concatenate(y_true_pool), np.concatenate(y_pred_pool), folds=k, seed=seed
    )


@dataclass(frozen=True)
class SearchSpace:
    """Ranges for the seeded random hyperparameter search."""

    n_estimators: tuple = (50, 500)
    max_depth: tuple = (4, 32)
    max_depth_none_prob: float = 0.5
    max_leaf_nodes: tuple = (8, 512)
    max_leaf_nodes_none_prob: float = 0.5
    min_samples_split: tuple = (2, 20)
    min_samples_leaf: tuple = (1, 10)
    criteria: tuple = ("gini", "entropy")
    bootstrap_options: tuple = (True, False)
    max_features_options: tuple = ("sqrt", "log2", "frac")

    def sample(self, rng: np.random.Generator) -> HyperParams:
        mf = self.max_features_options[rng.integers(len(self.max_features_options))]
        if mf == "frac":
            mf = round(float(rng.uniform(0.05, 1.0)), 3)
        return HyperParams(
            criterion=self.criteria[rng.integers(len(self.criteria))],
            bootstrap=bool(self.bootstrap_options[rng.integers(len(self.bootstrap_options))]),
            max_features=mf,
            max_depth=None
            if rng.random() < self.max_depth_none_prob
            else int(rng.integers(self.max_depth[0], self.max_depth[1] + 1)),
            max_leaf_nodes=None
            if rng.random() < self.max_leaf_nodes_none_prob
            else int(rng.integers(self.max_leaf_nodes[0], self.max_leaf_nodes[1] + 1)),
            n_estimators=int(rng.integers(self.n_estimators[0], self.n_estimators[1] + 1)),
            min_samples_split=int(rng.integers(self.min_samples_split[0], self.min_samples_split[1] + 1)),
            min_samples_leaf=int(rng.integers(self.min_samples_leaf[0], self.min_samples_leaf[1] + 1)),
        )


def search_hyperparams(
    X,
    y,
    budget: int,
    seed: int,
    space: SearchSpace = SearchSpace(),
    k: int = 5,
    sources=None,
):
    """Seeded random search; the winner maximizes inner-CV macro-F1.

    Trial i draws its configuration and CV seed from spawn child i of the
    master seed, so trial i is identical for any budget >= i+1. Ties keep
    the earliest trial. Returns (best_hp, best_report, trial_log).
    """
    if budget < 1:
        raise ValidationError("search budget must be >= 1")
    children = np.random.SeedSequence(seed).spawn(budget)
    best = None
    log = []
    for i, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        hp = space.sample(rng)
        cv_seed = int(child.generate_state(2)[1])
        report = cross_validate(X, y, hp, k=k, seed=cv_seed, sources=sources)
        log.append((hp, report.macro_f1))
        if best is None or report.macro_f1 > best[1].macro_f1:
            best = (hp, report)
    return best[0], best[1], log
