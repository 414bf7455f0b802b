"""Causal workflow engine.

A DAG-based causal model over workflow modules: structural validation,
causal-neighborhood queries (parents, Markov blanket), do-style intervention
surgery, a textual/JSON workflow format, static plan filtering against the
graph, logistic models with causal feature masking, and a synthetic
distribution-shift lab demonstrating why anchoring to causal parents is
robust where associative models are not.
"""

__version__ = "0.1.0"

from .errors import (
    AllMaskedError,
    BadIdentifierError,
    CvpError,
    CycleDetectedError,
    DimensionMismatchError,
    DuplicateEdgeError,
    DuplicateNodeError,
    GraphError,
    InvalidGraphError,
    MissingParentError,
    NonFiniteLossError,
    SelfLoopError,
    UnknownModuleError,
    UnknownNodeRefError,
    UnmappedFeatureError,
    WouldCreateCycleError,
)
from .graph import (
    CausalEdge,
    CausalGraph,
    Diagnostic,
    ModuleNode,
    NodeKind,
    ValidationReport,
    is_identifier,
)
from .dsl import (
    ParseError,
    SourceSpan,
    UnknownKindWarning,
    WorkflowParseError,
    parse_json,
    parse_text,
    read_graph_file,
    serialize_json,
    serialize_text,
)
from .plan import (
    AnchorPolicy,
    Plan,
    PlanReport,
    PlanStep,
    Violation,
    check_plan,
    plan_from_json,
    plan_to_json,
    suggest_order,
)
from .logistic import (
    Dataset,
    FeatureMask,
    ModelWeights,
    TrainConfig,
    causal_mask,
    evaluate_accuracy,
    loss_and_gradient,
    predict_proba,
    sigmoid,
    train,
    weights_from_json,
    weights_to_json,
)
from .rng import CounterRng
from .shift import (
    ExperimentReport,
    ModelResult,
    ShiftExperimentConfig,
    SyntheticDataset,
    dataset_csv,
    generate,
    report_csv,
    report_to_json,
    run_experiment,
    shift_world_graph,
    sweep,
)
from .store import GraphRecord, GraphStore, RevisionConflictError

__all__ = [
    "__version__",
    # errors
    "CvpError", "GraphError", "BadIdentifierError", "DuplicateNodeError",
    "UnknownNodeRefError", "SelfLoopError", "DuplicateEdgeError",
    "WouldCreateCycleError", "CycleDetectedError", "UnknownModuleError",
    "MissingParentError", "UnmappedFeatureError", "DimensionMismatchError",
    "AllMaskedError", "NonFiniteLossError", "InvalidGraphError",
    # graph
    "CausalGraph", "ModuleNode", "CausalEdge", "NodeKind", "Diagnostic",
    "ValidationReport", "is_identifier",
    # formats
    "ParseError", "SourceSpan", "WorkflowParseError", "UnknownKindWarning",
    "parse_text", "serialize_text", "parse_json", "serialize_json",
    "read_graph_file",
    # plans
    "Plan", "PlanStep", "AnchorPolicy", "Violation", "PlanReport",
    "check_plan", "suggest_order", "plan_to_json", "plan_from_json",
    # models
    "Dataset", "FeatureMask", "ModelWeights", "TrainConfig", "sigmoid",
    "predict_proba", "loss_and_gradient", "train", "evaluate_accuracy",
    "causal_mask", "weights_to_json", "weights_from_json",
    # rng + shift lab
    "CounterRng", "ShiftExperimentConfig", "SyntheticDataset", "ModelResult",
    "ExperimentReport", "generate", "run_experiment", "sweep",
    "shift_world_graph", "report_to_json", "report_csv", "dataset_csv",
    # store
    "GraphStore", "GraphRecord", "RevisionConflictError",
]
