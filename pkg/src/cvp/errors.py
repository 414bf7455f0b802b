"""Error hierarchy shared by every engine module.

Each exception carries a stable ``code`` tag that survives into validation
reports, plan reports, and gateway error bodies, so callers can dispatch on
``exc.code`` without string-matching messages.
"""

from __future__ import annotations


class CvpError(Exception):
    """Base class for all engine errors."""

    code = "Error"


class GraphError(CvpError):
    """Base class for causal-graph construction and query errors."""

    code = "GraphError"


class BadIdentifierError(GraphError):
    code = "BadIdentifier"


class DuplicateNodeError(GraphError):
    code = "DuplicateNode"


class UnknownNodeRefError(GraphError):
    code = "UnknownNodeRef"


class SelfLoopError(GraphError):
    code = "SelfLoop"


class DuplicateEdgeError(GraphError):
    code = "DuplicateEdge"


class WouldCreateCycleError(GraphError):
    """Adding this edge would close a directed cycle.

    ``cycle`` is the full node sequence of the would-be cycle, starting and
    ending at the same node, e.g. ``["C", "A", "B", "C"]``.
    """

    code = "WouldCreateCycle"

    def __init__(self, message: str, cycle: list[str]):
        super().__init__(message)
        self.cycle = list(cycle)


class CycleDetectedError(GraphError):
    """The graph already contains a directed cycle."""

    code = "CycleDetected"

    def __init__(self, message: str, cycle: list[str]):
        super().__init__(message)
        self.cycle = list(cycle)


class UnknownModuleError(CvpError):
    """A plan or mask referenced a module id absent from the graph."""

    code = "UnknownModule"


class MissingParentError(CvpError):
    """suggest_order was given a module set not closed under parents."""

    code = "MissingParent"

    def __init__(self, message: str, missing: str):
        super().__init__(message)
        self.missing = missing


class UnmappedFeatureError(CvpError):
    """A dataset feature has no corresponding graph node."""

    code = "UnmappedFeature"


class DimensionMismatchError(CvpError):
    code = "DimensionMismatch"


class AllMaskedError(CvpError):
    """Training requires at least one included feature."""

    code = "AllMasked"


class NonFiniteLossError(CvpError):
    """Training diverged (typically the learning rate is too high)."""

    code = "NonFiniteLoss"


class InvalidGraphError(CvpError):
    """The experiment graph lacks a required node."""

    code = "InvalidGraph"
