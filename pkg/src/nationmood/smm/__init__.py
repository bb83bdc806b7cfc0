from .forest import (
    CLASSES,
    HyperParams,
    SensorMoodModel,
    Tree,
    entropy,
    feature_importance,
    gini,
    model_from_json,
    model_to_json,
    train_smm,
    train_tree,
)
from .evaluate import (
    CVReport,
    SearchSpace,
    confusion_matrix,
    cross_validate,
    macro_f1_of,
    report_from_predictions,
    search_hyperparams,
    stratified_folds,
)

__all__ = [
    "CLASSES",
    "CVReport",
    "HyperParams",
    "SearchSpace",
    "SensorMoodModel",
    "Tree",
    "confusion_matrix",
    "cross_validate",
    "entropy",
    "feature_importance",
    "gini",
    "macro_f1_of",
    "model_from_json",
    "model_to_json",
    "report_from_predictions",
    "search_hyperparams",
    "stratified_folds",
    "train_smm",
    "train_tree",
]
