"""Immutable causal DAG over workflow modules.

A workflow is modeled as a directed graph: each node is an operable module
and a directed edge ``u -> v`` records that ``u`` is a direct causal parent
of ``v``.  Graphs are values.  Every mutating operation (:meth:`~CausalGraph.add_node`,
:meth:`~CausalGraph.add_edge`, :meth:`~CausalGraph.intervene`) returns a new
graph and leaves its input untouched, so instances can be shared between
threads without coordination.

Graphs grown through the construction API are DAGs by construction: cycle
creating edges are rejected eagerly, at insertion time.  The raw constructor
deliberately skips every check so that structures deserialized from untrusted
input can be represented first and diagnosed afterwards with
:meth:`~CausalGraph.validate`.

>>> g = CausalGraph.build("demo", nodes=["C", "S", "Y"], edges=[("C", "Y")])
>>> g.parents("Y")
frozenset({'C'})
>>> g.topological_order()
['C', 'S', 'Y']
"""

from __future__ import annotations

import heapq
import re
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import (
    BadIdentifierError,
    CycleDetectedError,
    DuplicateEdgeError,
    DuplicateNodeError,
    SelfLoopError,
    UnknownNodeRefError,
    WouldCreateCycleError,
)

__all__ = [
    "IDENT_PATTERN",
    "NodeKind",
    "ModuleNode",
    "CausalEdge",
    "Diagnostic",
    "ValidationReport",
    "CausalGraph",
    "is_identifier",
]

IDENT_PATTERN = r"[A-Za-z_][A-Za-z0-9_]*"
_IDENT_RE = re.compile(IDENT_PATTERN)


def is_identifier(s: str) -> bool:
    """True iff ``s`` is a legal module id."""
    return isinstance(s, str) and _IDENT_RE.fullmatch(s) is not None


class NodeKind(str, Enum):
    """Advisory role tag for a module; carries no algorithmic meaning."""

    TOOL = "tool"
    LLM = "llm"
    DATA = "data"
    GENERIC = "generic"


@dataclass(frozen=True)
class ModuleNode:
    """One operable module in a workflow.

    The record itself performs no validation; id legality and uniqueness are
    enforced by the graph construction API and reported by ``validate`` for
    graphs assembled through the raw constructor.
    """

    id: str
    kind: NodeKind = NodeKind.GENERIC
    label: str = ""


@dataclass(frozen=True, order=True)
class CausalEdge:
    """Directed causal edge: ``src`` is a direct causal parent of ``dst``."""

    src: str
    dst: str


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding; ``involved`` lists node ids or ``"a->b"`` edge refs."""

    code: str
    message: str
    involved: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def _edge_ref(src: str, dst: str) -> str:
    return f"{src}->{dst}"


class CausalGraph:
    """Named DAG of workflow modules.

    Parameters
    ----------
    name:
        Display name; the empty string is a valid name.
    nodes:
        Iterable of :class:`ModuleNode`, kept in insertion order.
    edges:
        Iterable of ``(src, dst)`` pairs or :class:`CausalEdge`.

    The constructor stores exactly what it is given, without any invariant
    checks, which is what ``validate`` needs in order to diagnose untrusted
    deserialized structures.  Use :meth:`build` (or ``add_node``/``add_edge``
    from an empty graph) to construct checked graphs.
    """

    __slots__ = ("name", "_nodes", "_edges", "_by_id", "_parents", "_children")

    def __init__(
        self,
        name: str = "",
        nodes: Iterable[ModuleNode] = (),
        edges: Iterable[tuple[str, str] | CausalEdge] = (),
    ):
        self.name = name
        self._nodes: tuple[ModuleNode, ...] = tuple(nodes)
        self._edges: tuple[tuple[str, str], ...] = tuple(
            (e.src, e.dst) if isinstance(e, CausalEdge) else (e[0], e[1]) for e in edges
        )
        self._by_id = {n.id: n for n in self._nodes}
        self._parents: dict[str, set[str]] = {n.id: set() for n in self._nodes}
        self._children: dict[str, set[str]] = {n.id: set() for n in self._nodes}
        for src, dst in self._edges:
            if dst in self._parents:
                self._parents[dst].add(src)
            if src in self._children:
                self._children[src].add(dst)

    @classmethod
    def build(
        cls,
        name: str = "",
        nodes: Iterable[ModuleNode | str] = (),
        edges: Iterable[tuple[str, str] | CausalEdge] = (),
    ) -> "CausalGraph":
        """Checked constructor: applies ``add_node``/``add_edge`` in order."""
        g = cls(name)
        for n in nodes:
            g = g.add_node(n)
        for e in edges:
            src, dst = (e.src, e.dst) if isinstance(e, CausalEdge) else (e[0], e[1])
            g = g.add_edge(src, dst)
        return g

    # --- basic accessors -------------------------------------------------

    @property
    def nodes(self) -> tuple[ModuleNode, ...]:
        """Nodes in insertion order."""
        return self._nodes

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self._nodes)

    @property
    def edges(self) -> tuple[CausalEdge, ...]:
        """Edges sorted by (src, dst)."""
        return tuple(CausalEdge(s, d) for s, d in sorted(self._edges))

    def node(self, node_id: str) -> ModuleNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNodeRefError(f"unknown node {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._by_id

    def has_edge(self, src: str, dst: str) -> bool:
        return (src, dst) in set(self._edges)

    def __contains__(self, node_id: str) -> bool:
        return self.has_node(node_id)

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[ModuleNode]:
        return iter(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalGraph):
            return NotImplemented
        return (
            self.name == other.name
            and self._nodes == other._nodes
            and sorted(self._edges) == sorted(other._edges)
        )

    def __hash__(self) -> int:
        return hash((self.name, self._nodes, tuple(sorted(self._edges))))

    def __repr__(self) -> str:
        return f"CausalGraph(name={self.name!r}, nodes={len(self._nodes)}, edges={len(self._edges)})"

    # --- construction ----------------------------------------------------

    def add_node(self, node: ModuleNode | str) -> "CausalGraph":
        """Return a new graph with ``node`` appended.

        A bare string is shorthand for a generic unlabeled module.

        Raises
        ------
        BadIdentifierError
            if the id does not match ``[A-Za-z_][A-Za-z0-9_]*``.
        DuplicateNodeError
            if the id is already present.
        """
        if isinstance(node, str):
            node = ModuleNode(node)
        if not is_identifier(node.id):
            raise BadIdentifierError(f"invalid module id {node.id!r}")
        if node.id in self._by_id:
            raise DuplicateNodeError(f"duplicate module id {node.id!r}")
        return CausalGraph(self.name, self._nodes + (node,), self._edges)

    def add_edge(self, src: str, dst: str) -> "CausalGraph":
        """Return a new graph with the edge ``src -> dst``.

        The result is guaranteed to still be a DAG; an edge that would close
        a cycle is rejected here rather than deferred to ``validate``.

        Raises
        ------
        UnknownNodeRefError, SelfLoopError, DuplicateEdgeError
        WouldCreateCycleError
            carries the full would-be cycle path on ``exc.cycle``.
        """
        for endpoint in (src, dst):
            if endpoint not in self._by_id:
                raise UnknownNodeRefError(f"unknown node {endpoint!r} in edge {_edge_ref(src, dst)}")
        if src == dst:
            raise SelfLoopError(f"self loop {_edge_ref(src, dst)}")
        if (src, dst) in set(self._edges):
            raise DuplicateEdgeError(f"duplicate edge {_edge_ref(src, dst)}")
        path = self._find_path(dst, src)
        if path is not None:
            cycle = [src] + path
            raise WouldCreateCycleError(
                f"edge {_edge_ref(src, dst)} would create cycle {' -> '.join(cycle)}", cycle
            )
        return CausalGraph(self.name, self._nodes, self._edges + ((src, dst),))

    def rename(self, name: str) -> "CausalGraph":
        return CausalGraph(name, self._nodes, self._edges)

    # --- validation -------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Diagnose every structural violation in this graph.

        Intended for graphs assembled from untrusted input through the raw
        constructor; graphs grown through ``add_node``/``add_edge`` always
        produce an ok report.  Cycle detection runs only once the edge list
        itself is structurally sound (no unknown endpoints, no self loops),
        since a cycle scan over malformed edges would be meaningless.
        """
        diags: list[Diagnostic] = []
        seen_ids: set[str] = set()
        for n in self._nodes:
            if not is_identifier(n.id):
                diags.append(Diagnostic("BadIdentifier", f"invalid module id {n.id!r}", (str(n.id),)))
            if n.id in seen_ids:
                diags.append(Diagnostic("DuplicateNode", f"duplicate module id {n.id!r}", (n.id,)))
            seen_ids.add(n.id)

        edges_sound = True
        seen_edges: set[tuple[str, str]] = set()
        for src, dst in self._edges:
            ref = _edge_ref(src, dst)
            for endpoint in (src, dst):
                if endpoint not in self._by_id:
                    diags.append(
                        Diagnostic("UnknownNodeRef", f"edge {ref} references unknown node {endpoint!r}", (ref,))
                    )
                    edges_sound = False
            if src == dst:
                diags.append(Diagnostic("SelfLoop", f"self loop {ref}", (ref,)))
                edges_sound = False
            if (src, dst) in seen_edges:
                diags.append(Diagnostic("DuplicateEdge", f"duplicate edge {ref}", (ref,)))
            seen_edges.add((src, dst))

        if edges_sound:
            cycle = self._find_cycle()
            if cycle is not None:
                diags.append(
                    Diagnostic("CycleDetected", f"cycle {' -> '.join(cycle)}", tuple(cycle))
                )
        return ValidationReport(tuple(diags))

    # --- ordering ----------------------------------------------------------

    def topological_order(self) -> list[str]:
        """Every node id exactly once, parents before children.

        Deterministic: among simultaneously available nodes the
        lexicographically smallest id comes first.

        Raises
        ------
        CycleDetectedError
            if invoked on an (unvalidated) cyclic graph.
        """
        indeg = {nid: len(self._parents[nid]) for nid in self._by_id}
        ready = [nid for nid, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order: list[str] = []
        while ready:
            nid = heapq.heappop(ready)
            order.append(nid)
            for child in self._children[nid]:
                indeg[child] -= 1
                if indeg[child] == 0:
                    heapq.heappush(ready, child)
        if len(order) != len(self._by_id):
            cycle = self._find_cycle()
            assert cycle is not None
            raise CycleDetectedError(f"graph contains cycle {' -> '.join(cycle)}", cycle)
        return order

    # --- neighborhood queries ----------------------------------------------

    def parents(self, node_id: str) -> frozenset[str]:
        self.node(node_id)
        return frozenset(self._parents[node_id])

    def children(self, node_id: str) -> frozenset[str]:
        self.node(node_id)
        return frozenset(self._children[node_id])

    def ancestors(self, node_id: str) -> frozenset[str]:
        """All nodes with a directed path to ``node_id``, excluding it."""
        return self._reach(node_id, self._parents)

    def descendants(self, node_id: str) -> frozenset[str]:
        """All nodes reachable from ``node_id``, excluding it."""
        return self._reach(node_id, self._children)

    def spouses(self, node_id: str) -> frozenset[str]:
        """Other parents of this node's children."""
        self.node(node_id)
        out: set[str] = set()
        for child in self._children[node_id]:
            out |= self._parents[child]
        out.discard(node_id)
        return frozenset(out)

    def markov_blanket(self, node_id: str) -> frozenset[str]:
        """Parents, children, and co-parents of children, excluding the node.

        The minimal neighborhood that carries all causally relevant
        information about ``node_id``.
        """
        self.node(node_id)
        out = set(self._parents[node_id]) | set(self._children[node_id]) | set(self.spouses(node_id))
        out.discard(node_id)
        return frozenset(out)

    # --- intervention -------------------------------------------------------

    def intervene(self, node_id: str) -> "CausalGraph":
        """Graph surgery for a forced assignment: drop all in-edges of the node.

        Out-edges and every other edge are preserved; the input graph is
        unchanged.  Idempotent.
        """
        self.node(node_id)
        kept = tuple((s, d) for s, d in self._edges if d != node_id)
        return CausalGraph(self.name, self._nodes, kept)

    # --- internals -----------------------------------------------------------

    def _reach(self, node_id: str, step: dict[str, set[str]]) -> frozenset[str]:
        self.node(node_id)
        seen: set[str] = set()
        frontier = deque(step[node_id])
        while frontier:
            nid = frontier.popleft()
            if nid in seen:
                continue
            seen.add(nid)
            frontier.extend(step.get(nid, ()))
        seen.discard(node_id)
        return frozenset(seen)

    def _find_path(self, start: str, goal: str) -> list[str] | None:
        """Shortest directed node path from ``start`` to ``goal``, or None."""
        if start == goal:
            return [start]
        prev: dict[str, str] = {}
        frontier = deque([start])
        seen = {start}
        while frontier:
            nid = frontier.popleft()
            for child in sorted(self._children.get(nid, ())):
                if child in seen:
                    continue
                prev[child] = nid
                if child == goal:
                    path = [goal]
                    while path[-1] != start:
                        path.append(prev[path[-1]])
                    return path[::-1]
                seen.add(child)
                frontier.append(child)
        return None

    def _find_cycle(self) -> list[str] | None:
        """Some directed cycle as ``[n0, ..., n0]``, or None. Deterministic.

        Iterative DFS; arbitrarily large deserialized graphs must not blow
        the interpreter stack.
        """
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {nid: WHITE for nid in self._by_id}
        for root in self._by_id:
            if color[root] != WHITE:
                continue
            path: list[str] = []
            work: list[tuple[str, Iterator[str]]] = []
            color[root] = GRAY
            path.append(root)
            work.append((root, iter(sorted(self._children.get(root, ())))))
            while work:
                nid, it = work[-1]
                advanced = False
                for child in it:
                    if child not in color:
                        continue
                    if color[child] == GRAY:
                        i = path.index(child)
                        return path[i:] + [child]
                    if color[child] == WHITE:
                        color[child] = GRAY
                        path.append(child)
                        work.append((child, iter(sorted(self._children.get(child, ())))))
                        advanced = True
                        break
                if not advanced:
                    color[nid] = BLACK
                    path.pop()
                    work.pop()
        return None
