"""Static plan checking against a causal graph.

A plan is an ordered list of module invocations, each declaring which earlier
modules' outputs it reads.  ``check_plan`` verifies the whole plan against
the graph under an anchoring policy: every declared read must fall inside the
executing module's causal neighborhood (its parents, or its Markov blanket),
and must refer to a module that already ran.  Findings are data, never
exceptions; the checker collects every violation rather than stopping at the
first, and orders them deterministically so CI output is stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import MissingParentError, UnknownModuleError
from .graph import CausalGraph

__all__ = [
    "PlanStep",
    "Plan",
    "AnchorPolicy",
    "Violation",
    "PlanReport",
    "check_plan",
    "suggest_order",
    "plan_to_obj",
    "plan_from_obj",
    "plan_to_json",
    "plan_from_json",
]


class AnchorPolicy(Enum):
    """Which causal neighborhood a step is allowed to read from."""

    PARENTS_ONLY = "ParentsOnly"
    MARKOV_BLANKET = "MarkovBlanket"

    @classmethod
    def parse(cls, value: "str | AnchorPolicy") -> "AnchorPolicy":
        if isinstance(value, AnchorPolicy):
            return value
        aliases = {
            "ParentsOnly": cls.PARENTS_ONLY,
            "parents": cls.PARENTS_ONLY,
            "MarkovBlanket": cls.MARKOV_BLANKET,
            "blanket": cls.MARKOV_BLANKET,
        }
        try:
            return aliases[value]
        except KeyError:
            raise ValueError(f"unknown anchor policy {value!r}") from None


@dataclass(frozen=True)
class PlanStep:
    """One agent action: run ``module``, consuming the outputs in ``reads``.

    A step reading itself or a module executing twice is representable (plans
    arrive from untrusted JSON); ``check_plan`` reports such plans instead of
    refusing to hold them.
    """

    index: int
    module: str
    reads: frozenset[str]


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...]

    def __post_init__(self):
        for i, step in enumerate(self.steps):
            if step.index != i:
                raise ValueError(f"step indices must be contiguous from 0; got {step.index} at position {i}")

    @classmethod
    def of(cls, *entries: "str | tuple[str, Iterable[str]]") -> "Plan":
        """Build a plan from ``module`` or ``(module, reads)`` entries."""
        steps = []
        for i, entry in enumerate(entries):
            if isinstance(entry, str):
                steps.append(PlanStep(i, entry, frozenset()))
            else:
                module, reads = entry
                steps.append(PlanStep(i, module, frozenset(reads)))
        return cls(tuple(steps))

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Violation:
    code: str
    step_index: int
    subject: str
    detail: str

    def to_obj(self) -> dict:
        return {"code": self.code, "step_index": self.step_index, "subject": self.subject, "detail": self.detail}


@dataclass(frozen=True)
class PlanReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_obj(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_obj() for v in self.violations]}


def check_plan(
    graph: CausalGraph,
    plan: Plan,
    policy: AnchorPolicy = AnchorPolicy.PARENTS_ONLY,
) -> PlanReport:
    """Check every step of ``plan`` against ``graph`` under ``policy``.

    Violation codes:

    - ``UnknownModule``: the step's module, or one of its reads, is not in
      the graph.
    - ``SpuriousDependency``: a read outside the policy's allowed set
      (parents of the module, or its Markov blanket).
    - ``OrderViolation``: a read of a module that has not executed at an
      earlier step.
    - ``DuplicateExecution``: the module already executed.
    - ``SelfRead``: the step reads its own module.

    All violations are collected and sorted by (step index, code, subject).
    """
    violations: list[Violation] = []
    executed: set[str] = set()

    def add(code: str, index: int, subject: str, detail: str) -> None:
        violations.append(Violation(code, index, subject, detail))

    for step in plan.steps:
        module = step.module
        known = graph.has_node(module)
        if not known:
            add("UnknownModule", step.index, module, f"module {module!r} is not in the graph")
        elif module in executed:
            add("DuplicateExecution", step.index, module, f"module {module!r} already executed")

        allowed: frozenset[str] | None = None
        if known:
            if policy is AnchorPolicy.PARENTS_ONLY:
                allowed = graph.parents(module)
            else:
                allowed = graph.markov_blanket(module)

        for read in sorted(step.reads):
            if read == module:
                add("SelfRead", step.index, read, f"step reads its own module {module!r}")
                continue
            if not graph.has_node(read):
                add("UnknownModule", step.index, read, f"read {read!r} is not in the graph")
                continue
            if allowed is not None and read not in allowed:
                add(
                    "SpuriousDependency",
                    step.index,
                    read,
                    f"{read!r} is not causally anchored for {module!r} under {policy.value}",
                )
            if read not in executed:
                add("OrderViolation", step.index, read, f"{read!r} has not executed before step {step.index}")

        executed.add(module)

    violations.sort(key=lambda v: (v.step_index, v.code, v.subject))
    return PlanReport(tuple(violations))


def suggest_order(graph: CausalGraph, modules: Iterable[str]) -> Plan:
    """The canonical compliant plan over ``modules``.

    Steps follow the graph's topological order restricted to the requested
    modules, each reading exactly its parents.  The result always passes
    ``check_plan`` under ParentsOnly.

    Raises
    ------
    UnknownModuleError
        if a requested module is not in the graph.
    MissingParentError
        if the set is not closed under parents (names the missing parent).
    """
    wanted = set(modules)
    for m in sorted(wanted):
        if not graph.has_node(m):
            raise UnknownModuleError(f"module {m!r} is not in the graph")
    for m in sorted(wanted):
        for parent in sorted(graph.parents(m)):
            if parent not in wanted:
                raise MissingParentError(
                    f"module {m!r} requires its parent {parent!r} in the requested set", parent
                )
    steps = []
    for nid in graph.topological_order():
        if nid in wanted:
            steps.append(PlanStep(len(steps), nid, graph.parents(nid)))
    return Plan(tuple(steps))


# --- JSON carrier -----------------------------------------------------------


def plan_to_obj(plan: Plan) -> dict:
    return {"steps": [{"module": s.module, "reads": sorted(s.reads)} for s in plan.steps]}


def plan_from_obj(obj: object) -> Plan:
    """Strict parse of the plan JSON shape; step index is positional."""
    if not isinstance(obj, dict) or set(obj) != {"steps"}:
        raise ValueError("plan must be an object with exactly one key 'steps'")
    raw_steps = obj["steps"]
    if not isinstance(raw_steps, list):
        raise ValueError("'steps' must be an array")
    steps = []
    for i, item in enumerate(raw_steps):
        if not isinstance(item, dict) or not set(item) <= {"module", "reads"}:
            raise ValueError(f"steps[{i}] must be an object with keys 'module' and 'reads'")
        module = item.get("module")
        if not isinstance(module, str):
            raise ValueError(f"steps[{i}] is missing a string 'module'")
        reads = item.get("reads", [])
        if not isinstance(reads, list) or not all(isinstance(r, str) for r in reads):
            raise ValueError(f"steps[{i}] 'reads' must be an array of strings")
        steps.append(PlanStep(i, module, frozenset(reads)))
    return Plan(tuple(steps))


def plan_to_json(plan: Plan) -> str:
    return json.dumps(plan_to_obj(plan), ensure_ascii=False, separators=(",", ":"))


def plan_from_json(document: str | bytes) -> Plan:
    return plan_from_obj(json.loads(document))
