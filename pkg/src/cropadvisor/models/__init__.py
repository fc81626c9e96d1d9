"""Tabular classifiers: from-scratch decision tree, random forest, and baselines."""

from .baselines import (
    BASELINE_KINDS,
    BaselineModel,
    GaussianNBModel,
    KnnModel,
    LinearSvmModel,
    LogisticSoftmaxModel,
    fit_baseline,
    fit_gaussian_nb,
    fit_knn,
    fit_linear_svm,
    fit_logistic_softmax,
)
from .boosting import GradientBoostedTreesModel, fit_gradient_boosted_trees
from .forest import (
    ForestConfig,
    RandomForestModel,
    feature_importances,
    fit_random_forest,
    oob_accuracy,
    oob_details,
    oob_votes,
)
from .tree import (
    BestSplit,
    DecisionTreeModel,
    TreeConfig,
    TreeNode,
    best_split,
    fit_decision_tree,
    gini_impurity,
)

__all__ = [
    "BASELINE_KINDS",
    "BaselineModel",
    "BestSplit",
    "DecisionTreeModel",
    "ForestConfig",
    "GaussianNBModel",
    "GradientBoostedTreesModel",
    "KnnModel",
    "LinearSvmModel",
    "LogisticSoftmaxModel",
    "RandomForestModel",
    "TreeConfig",
    "TreeNode",
    "best_split",
    "feature_importances",
    "fit_baseline",
    "fit_decision_tree",
    "fit_gaussian_nb",
    "fit_gradient_boosted_trees",
    "fit_knn",
    "fit_linear_svm",
    "fit_logistic_softmax",
    "fit_random_forest",
    "gini_impurity",
    "oob_accuracy",
    "oob_details",
    "oob_votes",
]
