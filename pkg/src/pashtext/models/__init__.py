"""Eight classifier families behind one train/predict contract.

All families are implemented from first principles on top of numpy arrays;
the only shared machinery is the sparse vector type from
:mod:`pashtext.vectorize` and the package PRNG.
"""

from .base import KIND_DISPLAY_NAMES, Model, ModelKind, argmax_lowest
from .params import (
    COSINE,
    DEFAULT_SEED,
    EUCLIDEAN,
    DecisionTreeParams,
    GaussianNBParams,
    KNNParams,
    LinearParams,
    MLPParams,
    MultinomialNBParams,
    RandomForestParams,
    default_params,
    params_class_for,
    params_with_overrides,
)
from .knn import KNNModel, knn_neighbors, train_knn
from .linear import (
    LinearSVMModel,
    LogisticRegressionModel,
    hinge_loss_value,
    logistic_loss_and_grads,
    svm_loss_and_grads,
    train_linear_svm,
    train_logistic_regression,
)
from .mlp import (
    AdamState,
    MLPModel,
    init_mlp,
    mlp_epoch,
    mlp_loss,
    mlp_loss_and_grads,
    relu,
    train_mlp,
)
from .naive_bayes import (
    GaussianNBModel,
    MultinomialNBModel,
    train_gaussian_nb,
    train_multinomial_nb,
)
from .tree import (
    DecisionTreeModel,
    RandomForestModel,
    TreeNode,
    gini_impurity,
    train_decision_tree,
    train_random_forest,
)
from .io import load_model, model_document, model_from_document, save_model
from .train import train

__all__ = [
    "AdamState",
    "COSINE",
    "DEFAULT_SEED",
    "DecisionTreeModel",
    "DecisionTreeParams",
    "EUCLIDEAN",
    "GaussianNBModel",
    "GaussianNBParams",
    "KIND_DISPLAY_NAMES",
    "KNNModel",
    "KNNParams",
    "LinearParams",
    "LinearSVMModel",
    "LogisticRegressionModel",
    "MLPModel",
    "MLPParams",
    "Model",
    "ModelKind",
    "MultinomialNBModel",
    "MultinomialNBParams",
    "RandomForestModel",
    "RandomForestParams",
    "TreeNode",
    "argmax_lowest",
    "default_params",
    "gini_impurity",
    "hinge_loss_value",
    "init_mlp",
    "knn_neighbors",
    "load_model",
    "logistic_loss_and_grads",
    "mlp_epoch",
    "mlp_loss",
    "mlp_loss_and_grads",
    "model_document",
    "model_from_document",
    "params_class_for",
    "params_with_overrides",
    "relu",
    "save_model",
    "svm_loss_and_grads",
    "train",
    "train_decision_tree",
    "train_gaussian_nb",
    "train_knn",
    "train_linear_svm",
    "train_logistic_regression",
    "train_mlp",
    "train_multinomial_nb",
    "train_random_forest",
]
