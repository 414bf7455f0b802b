"""Synthetic distribution-shift lab.

Generates two-feature binary classification data whose spurious feature is
correlated with the label through the environment, not through mechanism:

1. ``x_c ~ Normal(0, 1)``                       (the causal feature)
2. ``y_raw = 1 if x_c > 0 else 0``
3. ``y`` = ``y_raw`` flipped with probability ``flip_prob``
4. ``x_s = env_sign * alpha * (2y - 1) + Normal(0, sigma_s)``

The training environment uses ``env_sign = +1`` and the test environment
``-1``, so a model that leans on ``x_s`` inherits a correlation that reverses
at test time, while a model anchored to the causal parent ``x_c`` is immune.
``run_experiment`` trains both models on the same training data and reports
accuracies on both environments.

All randomness is counter-based and keyed by (seed, stream tag, row index,
substream): datasets and reports are bitwise-reproducible.

The default ``spurious_strength``/``spurious_noise_sd`` pair was frozen by a
coarse grid search (alpha in [0.5, 2] step 0.25, sigma_s in [0.4, 1.2] step
0.1, candidates ordered from (1.0, 0.75)) to the first pair whose seed-42
report lands within 3 percentage points of the reference accuracy quadruple
(93.8/70.0 unmasked, 94.4/94.4 anchored); see demos/demo_calibration.py.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CvpError, InvalidGraphError
from .graph import CausalGraph
from .logistic import (
    Dataset,
    FeatureMask,
    ModelWeights,
    TrainConfig,
    causal_mask,
    evaluate_accuracy,
    train,
    weights_to_obj,
)
from .rng import CounterRng

__all__ = [
    "FEATURE_NODES",
    "TARGET_NODE",
    "ShiftExperimentConfig",
    "SyntheticDataset",
    "ModelResult",
    "ExperimentReport",
    "shift_world_graph",
    "generate",
    "run_experiment",
    "sweep",
    "report_to_obj",
    "report_to_json",
    "report_csv",
    "dataset_csv",
]

FEATURE_NODES = {"x_c": "C", "x_s": "S"}
TARGET_NODE = "Y"

# Frozen by the calibration grid; see the module docstring.
DEFAULT_SPURIOUS_STRENGTH = 0.5
DEFAULT_SPURIOUS_NOISE_SD = 0.7

_SUB_XC, _SUB_FLIP, _SUB_XS = 0, 1, 2


def shift_world_graph() -> CausalGraph:
    """The three-module world: C -> Y with S isolated (no edge into Y)."""
    return CausalGraph.build("shift-world", nodes=["C", "S", "Y"], edges=[("C", "Y")])


@dataclass(frozen=True)
class ShiftExperimentConfig:
    seed: int = 42
    n_train: int = 5000
    n_test: int = 5000
    flip_prob: float = 0.05
    spurious_strength: float = DEFAULT_SPURIOUS_STRENGTH
    spurious_noise_sd: float = DEFAULT_SPURIOUS_NOISE_SD
    train_env_sign: int = +1
    test_env_sign: int = -1
    trainer: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        if not (isinstance(self.n_train, int) and self.n_train >= 1):
            raise ValueError("n_train must be a positive integer")
        if not (isinstance(self.n_test, int) and self.n_test >= 1):
            raise ValueError("n_test must be a positive integer")
        if not 0.0 <= self.flip_prob <= 0.5:
            raise ValueError("flip_prob must lie in [0, 0.5]")
        if self.spurious_strength < 0:
            raise ValueError("spurious_strength must be nonnegative")
        if not self.spurious_noise_sd > 0:
            raise ValueError("spurious_noise_sd must be positive")
        if self.train_env_sign not in (+1, -1) or self.test_env_sign not in (+1, -1):
            raise ValueError("environment signs must be +1 or -1")


class SyntheticDataset(Dataset):
    """A generated environment; ``env_sign`` records which one."""

    env_sign: int

    def __init__(self, rows, labels, env_sign: int):
        super().__init__(("x_c", "x_s"), rows, labels)
        object.__setattr__(self, "env_sign", int(env_sign))


def generate(config: ShiftExperimentConfig, env_sign: int, n: int, stream_tag: str) -> SyntheticDataset:
    """One environment's dataset; deterministic in (config.seed, stream_tag)."""
    if env_sign not in (+1, -1):
        raise ValueError("env_sign must be +1 or -1")
    rng = CounterRng(config.seed, stream_tag)
    x_c = rng.normals(_SUB_XC, n)
    y_raw = (x_c > 0).astype(np.int64)
    flip = rng.bernoulli(_SUB_FLIP, n, config.flip_prob)
    y = np.where(flip, 1 - y_raw, y_raw)
    noise = rng.normals(_SUB_XS, n)
    x_s = env_sign * config.spurious_strength * (2 * y - 1) + config.spurious_noise_sd * noise
    return SyntheticDataset(np.column_stack([x_c, x_s]), y, env_sign)


@dataclass(frozen=True, eq=False)
class ModelResult:
    name: str
    train_accuracy: float
    test_accuracy: float
    weights: ModelWeights
    mask: FeatureMask


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """Both models' accuracies on both environments, plus provenance.

    ``error`` is None on success; sweeps record per-point failures here and
    keep going.
    """

    config: ShiftExperimentConfig
    models: tuple[ModelResult, ...] = ()
    generator_digest: str = ""
    error: str | None = None

    def model(self, name: str) -> ModelResult:
        for m in self.models:
            if m.name == name:
                return m
        raise KeyError(name)


def _digest(train_ds: SyntheticDataset, test_ds: SyntheticDataset) -> str:
    h = hashlib.sha256()
    for ds in (train_ds, test_ds):
        h.update(np.int64(ds.env_sign).tobytes())
        h.update(np.int64(ds.n).tobytes())
        h.update(ds.rows.tobytes())
        h.update(ds.labels.tobytes())
    return h.hexdigest()


def run_experiment(config: ShiftExperimentConfig, graph: CausalGraph) -> ExperimentReport:
    """Generate both environments, train both models, evaluate everywhere.

    The unmasked model and the anchored model are fitted to the *same*
    training data; the anchored mask comes from the graph's parent set for
    the target node.
    """
    for required in (*FEATURE_NODES.values(), TARGET_NODE):
        if not graph.has_node(required):
            raise InvalidGraphError(f"experiment graph must contain node {required!r}")

    train_ds = generate(config, config.train_env_sign, config.n_train, "train")
    test_ds = generate(config, config.test_env_sign, config.n_test, "test")

    full_mask = FeatureMask.all_included(train_ds.dim)
    anchored_mask = causal_mask(graph, TARGET_NODE, FEATURE_NODES)

    results = []
    for name, mask in (("Associative", full_mask), ("CausalAnchored", anchored_mask)):
        weights = train(train_ds, mask, config.trainer)
        results.append(
            ModelResult(
                name=name,
                train_accuracy=evaluate_accuracy(weights, mask, train_ds),
                test_accuracy=evaluate_accuracy(weights, mask, test_ds),
                weights=weights,
                mask=mask,
            )
        )
    return ExperimentReport(config, tuple(results), _digest(train_ds, test_ds))


_SWEEPABLE = ("spurious_strength", "spurious_noise_sd", "flip_prob")


def sweep(
    config: ShiftExperimentConfig,
    parameter: str,
    values,
    graph: CausalGraph | None = None,
) -> list[ExperimentReport]:
    """One report per value; point i runs at seed ``config.seed + i``.

    Failures (an invalid value, training divergence) are recorded on the
    point's report and do not abort the remaining points.
    """
    if parameter not in _SWEEPABLE:
        raise ValueError(f"parameter must be one of {_SWEEPABLE}, got {parameter!r}")
    graph = graph if graph is not None else shift_world_graph()
    reports: list[ExperimentReport] = []
    for i, value in enumerate(values):
        try:
            point = replace(config, seed=config.seed + i, **{parameter: value})
            reports.append(run_experiment(point, graph))
        except (CvpError, ValueError) as exc:
            failed = replace(config, seed=config.seed + i)
            reports.append(ExperimentReport(failed, (), "", error=f"{parameter}={value!r}: {exc}"))
    return reports


# --- export -----------------------------------------------------------------


def _config_to_obj(config: ShiftExperimentConfig) -> dict:
    return {
        "seed": config.seed,
        "n_train": config.n_train,
        "n_test": config.n_test,
        "flip_prob": config.flip_prob,
        "spurious_strength": config.spurious_strength,
        "spurious_noise_sd": config.spurious_noise_sd,
        "train_env_sign": config.train_env_sign,
        "test_env_sign": config.test_env_sign,
        "trainer": {
            "learning_rate": config.trainer.learning_rate,
            "max_iterations": config.trainer.max_iterations,
            "gradient_tolerance": config.trainer.gradient_tolerance,
            "initialization": config.trainer.initialization,
        },
    }


def report_to_obj(report: ExperimentReport) -> dict:
    return {
        "config": _config_to_obj(report.config),
        "models": {
            m.name: {
                "train_accuracy": m.train_accuracy,
                "test_accuracy": m.test_accuracy,
                "weights": weights_to_obj(m.weights, m.mask, ("x_c", "x_s")),
            }
            for m in report.models
        },
        "generator_digest": report.generator_digest,
        "error": report.error,
    }


def report_to_json(report: ExperimentReport, indent: int | None = None) -> str:
    return json.dumps(report_to_obj(report), indent=indent, separators=None if indent else (",", ":"))


def report_csv(report: ExperimentReport) -> str:
    """Summary rows ``model,env,accuracy``, accuracy as a 6-decimal fraction."""
    lines = ["model,env,accuracy"]
    for m in report.models:
        lines.append(f"{m.name},train,{m.train_accuracy:.6f}")
        lines.append(f"{m.name},test,{m.test_accuracy:.6f}")
    return "".join(line + "\n" for line in lines)


def dataset_csv(dataset: Dataset) -> str:
    """Full export, header ``x_c,x_s,y``, one row per sample."""
    lines = [",".join(dataset.feature_names) + ",y"]
    for row, label in zip(dataset.rows, dataset.labels):
        lines.append(",".join(repr(float(v)) for v in row) + f",{int(label)}")
    return "".join(line + "\n" for line in lines)
