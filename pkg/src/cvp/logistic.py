"""Logistic prediction and deterministic full-batch training with feature masking.

Two prediction modes share one implementation: an unmasked model over all
features, and a causally anchored model whose mask keeps only the target's
parent features.  Masked columns contribute nothing to scores, losses, or
gradients, and their weights stay structurally zero, so both variants share
one weight layout and one serialization.

Training is plain full-batch gradient descent from zeros.  No stochasticity
anywhere: identical inputs give bitwise-identical weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AllMaskedError,
    DimensionMismatchError,
    NonFiniteLossError,
    UnknownModuleError,
    UnmappedFeatureError,
)
from .graph import CausalGraph

__all__ = [
    "Dataset",
    "FeatureMask",
    "ModelWeights",
    "TrainConfig",
    "sigmoid",
    "predict_proba",
    "loss_and_gradient",
    "train",
    "evaluate_accuracy",
    "causal_mask",
    "weights_to_obj",
    "weights_from_obj",
    "weights_to_json",
    "weights_from_json",
]


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix with binary labels.

    rows: (n, d) float; labels: (n,) in {0, 1}; n >= 1; all values finite.
    """

    feature_names: tuple[str, ...]
    rows: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        rows = np.array(self.rows, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64)
        if rows.ndim != 2:
            raise DimensionMismatchError(f"rows must be 2-D, got shape {rows.shape}")
        if rows.shape[0] < 1:
            raise ValueError("dataset needs at least one row")
        if rows.shape[1] != len(self.feature_names):
            raise DimensionMismatchError(
                f"{len(self.feature_names)} feature names for {rows.shape[1]} columns"
            )
        if labels.shape != (rows.shape[0],):
            raise DimensionMismatchError(
                f"labels shape {labels.shape} does not match {rows.shape[0]} rows"
            )
        if not np.isfinite(rows).all():
            raise ValueError("rows contain non-finite values")
        if not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        rows.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class FeatureMask:
    """Per-column inclusion flags, aligned with a dataset's feature order."""

    included: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "included", tuple(bool(b) for b in self.included))

    @classmethod
    def all_included(cls, dim: int) -> "FeatureMask":
        return cls((True,) * dim)

    @property
    def dim(self) -> int:
        return len(self.included)

    @property
    def n_included(self) -> int:
        return sum(self.included)

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.included))


@dataclass(frozen=True, eq=False)
class ModelWeights:
    """Bias plus one weight per feature column, masked columns included.

    Masked columns keep a structural zero after zero-initialized training.
    """

    bias: float
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bias", float(self.bias))
        w = np.array(self.weights, dtype=np.float64).reshape(-1)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class TrainConfig:
    """Full-batch gradient descent settings; only zero initialization exists."""

    learning_rate: float = 0.5
    max_iterations: int = 500
    gradient_tolerance: float = 1e-6
    initialization: str = "Zeros"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if not (isinstance(self.max_iterations, int) and self.max_iterations > 0):
            raise ValueError("max_iterations must be a positive integer")
        if self.gradient_tolerance < 0:
            raise ValueError("gradient_tolerance must be nonnegative")
        if self.initialization != "Zeros":
            raise ValueError(f"unknown initialization {self.initialization!r}")


def sigmoid(z):
    """1/(1+exp(-z)), sign-split so neither branch can overflow.

    Accepts scalars or arrays; returns a float for scalar input.
    """
    arr = np.asarray(z, dtype=np.float64)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr)
    out = np.empty_like(flat)
    pos = flat >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-flat[pos]))
    ez = np.exp(flat[~pos])
    out[~pos] = ez / (1.0 + ez)
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape)


def _check_dims(weights: ModelWeights, mask: FeatureMask, dim: int) -> None:
    if weights.dim != dim or mask.dim != dim:
        raise DimensionMismatchError(
            f"weights dim {weights.dim}, mask dim {mask.dim}, data dim {dim} must agree"
        )


def _scores(weights: ModelWeights, mask: FeatureMask, rows: np.ndarray) -> np.ndarray:
    idx = mask.indices
    return weights.bias + rows[:, idx] @ weights.weights[idx]


def predict_proba(weights: ModelWeights, mask: FeatureMask, row) -> float:
    """P(y=1 | row) under the masked model; masked columns are ignored."""
    x = np.asarray(row, dtype=np.float64).reshape(-1)
    _check_dims(weights, mask, x.shape[0])
    return sigmoid(float(_scores(weights, mask, x[None, :])[0]))


def loss_and_gradient(
    weights: ModelWeights, mask: FeatureMask, dataset: Dataset
) -> tuple[float, float, np.ndarray]:
    """Mean binary cross-entropy and its gradient, masked columns pinned to 0.

    loss = mean(softplus(z) - y z) with z the masked score, which equals
    -mean[y log p + (1-y) log(1-p)] without ever forming log(0).
    """
    _check_dims(weights, mask, dataset.dim)
    z = _scores(weights, mask, dataset.rows)
    y = dataset.labels.astype(np.float64)
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    residual = sigmoid(z) - y
    grad_bias = float(np.mean(residual))
    grad_w = np.zeros(dataset.dim)
    idx = mask.indices
    grad_w[idx] = dataset.rows[:, idx].T @ residual / dataset.n
    return loss, grad_bias, grad_w


def train(dataset: Dataset, mask: FeatureMask, config: TrainConfig = TrainConfig()) -> ModelWeights:
    """Deterministic full-batch gradient descent from zeros.

    Stops after ``max_iterations`` updates or once the gradient max-norm over
    the bias and included weights drops below ``gradient_tolerance``.

    Raises
    ------
    AllMaskedError
        if no feature is included.
    NonFiniteLossError
        on divergence (learning rate too high for the data scale).
    """
    if mask.dim != dataset.dim:
        raise DimensionMismatchError(f"mask dim {mask.dim} does not match data dim {dataset.dim}")
    if mask.n_included == 0:
        raise AllMaskedError("training requires at least one included feature")

    idx = mask.indices
    x = dataset.rows[:, idx]
    y = dataset.labels.astype(np.float64)
    n = dataset.n
    bias = 0.0
    w = np.zeros(len(idx))
    lr = config.learning_rate

    # Divergence is detected and raised as a typed error; silence the
    # intermediate overflow warnings that precede it.
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(config.max_iterations):
            z = bias + x @ w
            loss = np.mean(np.logaddexp(0.0, z) - y * z)
            if not np.isfinite(loss):
                raise NonFiniteLossError(f"loss became non-finite (learning_rate={lr})")
            residual = sigmoid(z) - y
            grad_bias = float(np.mean(residual))
            grad_w = x.T @ residual / n
            if max(abs(grad_bias), float(np.max(np.abs(grad_w), initial=0.0))) < config.gradient_tolerance:
                break
            bias -= lr * grad_bias
            w -= lr * grad_w

    full = np.zeros(dataset.dim)
    full[idx] = w
    if not (np.isfinite(bias) and np.isfinite(full).all()):
        raise NonFiniteLossError(f"weights became non-finite (learning_rate={lr})")
    return ModelWeights(bias, full)


def evaluate_accuracy(weights: ModelWeights, mask: FeatureMask, dataset: Dataset) -> float:
    """Fraction of rows where (predict_proba >= 0.5) matches the label.

    The tie at exactly 0.5 classifies as 1; fixed and documented, it only
    matters on measure-zero events for continuous features.
    """
    _check_dims(weights, mask, dataset.dim)
    p = sigmoid(_scores(weights, mask, dataset.rows))
    predicted = (p >= 0.5).astype(np.int64)
    return float(np.mean(predicted == dataset.labels))


def causal_mask(
    graph: CausalGraph,
    target: str,
    features: Mapping[str, str] | Sequence[str] | Iterable[str],
) -> FeatureMask:
    """Mask keeping exactly the features that are causal parents of ``target``.

    ``features`` maps feature name -> graph node id, in dataset column order;
    a plain sequence of names is shorthand for the identity mapping.
    """
    if isinstance(features, Mapping):
        items = list(features.items())
    else:
        items = [(name, name) for name in features]
    if not graph.has_node(target):
        raise UnknownModuleError(f"target {target!r} is not in the graph")
    parent_ids = graph.parents(target)
    included = []
    for feature, node_id in items:
        if not graph.has_node(node_id):
            raise UnmappedFeatureError(f"feature {feature!r} maps to unknown node {node_id!r}")
        included.append(node_id in parent_ids)
    return FeatureMask(tuple(included))


# --- serialization ----------------------------------------------------------


def weights_to_obj(weights: ModelWeights, mask: FeatureMask, feature_names: Sequence[str]) -> dict:
    return {
        "bias": weights.bias,
        "weights": [float(v) for v in weights.weights],
        "feature_names": list(feature_names),
        "mask": [bool(b) for b in mask.included],
    }


def weights_from_obj(obj: dict) -> tuple[ModelWeights, FeatureMask, tuple[str, ...]]:
    return (
        ModelWeights(obj["bias"], obj["weights"]),
        FeatureMask(tuple(obj["mask"])),
        tuple(obj["feature_names"]),
    )


def weights_to_json(weights: ModelWeights, mask: FeatureMask, feature_names: Sequence[str]) -> str:
    return json.dumps(weights_to_obj(weights, mask, feature_names), separators=(",", ":"))


def weights_from_json(document: str | bytes) -> tuple[ModelWeights, FeatureMask, tuple[str, ...]]:
    return weights_from_obj(json.loads(document))
