// Editor session state and the pure gesture reducers behind the DOM
// handlers. Every reducer returns a fresh state; the controller owns
// sequencing and server synchronization.

import {
  addEdge,
  addNode,
  emptyGraph,
  hasEdge,
  hasNode,
  removeEdge,
  removeNode,
  renameNode,
  validateDraft,
  wouldCreateCycle,
} from "./graph.js";
import type { LayoutMap } from "./layout.js";
import { placeMissing } from "./layout.js";
import type {
  BlanketDoc,
  Diagnostic,
  ExperimentReportDoc,
  GraphDoc,
  NodeKind,
  PlanReportDoc,
  Policy,
} from "./types.js";

export interface InterventionPreview {
  node: string;
  graph: GraphDoc;
  removedEdges: { from: string; to: string }[];
}

export interface ConflictInfo {
  currentRevision: number;
  detail: string;
}

export interface SessionState {
  graphId: string | null;
  revision: number | null;
  draft: GraphDoc;
  dirty: boolean;
  policy: Policy;
  selected: string | null;
  layout: LayoutMap;
  diagnostics: Diagnostic[];
  cyclePath: string[] | null;
  overlay: { node: string; blanket: BlanketDoc } | null;
  preview: InterventionPreview | null;
  planReport: PlanReportDoc | null;
  experiment: ExperimentReportDoc | null;
  conflict: ConflictInfo | null;
  notice: string | null;
}

export function initialState(): SessionState {
  return {
    graphId: null,
    revision: null,
    draft: emptyGraph(),
    dirty: false,
    policy: "ParentsOnly",
    selected: null,
    layout: {},
    diagnostics: [],
    cyclePath: null,
    overlay: null,
    preview: null,
    planReport: null,
    experiment: null,
    conflict: null,
    notice: null,
  };
}

function withDraft(state: SessionState, draft: GraphDoc): SessionState {
  return {
    ...state,
    draft,
    dirty: true,
    diagnostics: validateDraft(draft),
    cyclePath: null,
    overlay: null,
    preview: null,
    layout: placeMissing(state.layout, draft.nodes.map((n) => n.id)),
  };
}

export function loadGraph(
  state: SessionState,
  graphId: string,
  revision: number,
  doc: GraphDoc,
  layout: LayoutMap,
): SessionState {
  return {
    ...initialState(),
    graphId,
    revision,
    draft: doc,
    policy: state.policy,
    layout: placeMissing(layout, doc.nodes.map((n) => n.id)),
    diagnostics: validateDraft(doc),
  };
}

export function newDraft(state: SessionState, name: string): SessionState {
  return { ...initialState(), policy: state.policy, draft: emptyGraph(name), dirty: true };
}

// --- gestures ---------------------------------------------------------------

export function gestureAddNode(
  state: SessionState,
  id: string,
  x: number,
  y: number,
  kind: NodeKind = "generic",
  label = "",
): SessionState {
  const next = withDraft(state, addNode(state.draft, id, kind, label));
  return {
    ...next,
    selected: id,
    layout: { ...next.layout, [id]: { x, y } },
  };
}

export function gestureRenameNode(state: SessionState, oldId: string, newId: string): SessionState {
  if (!hasNode(state.draft, oldId)) {
    return { ...state, notice: `no node '${oldId}' to rename` };
  }
  const next = withDraft(state, renameNode(state.draft, oldId, newId));
  const layout = { ...next.layout };
  if (oldId in layout) {
    layout[newId] = layout[oldId];
    delete layout[oldId];
  }
  return { ...next, layout, selected: state.selected === oldId ? newId : state.selected };
}

export function gestureDeleteNode(state: SessionState, id: string): SessionState {
  const next = withDraft(state, removeNode(state.draft, id));
  const layout = { ...next.layout };
  delete layout[id];
  return { ...next, layout, selected: state.selected === id ? null : state.selected };
}

// Edge drags that would close a cycle are refused inline: the draft stays
// untouched and the offending cycle path is exposed for highlighting.
export function gestureDrawEdge(state: SessionState, from: string, to: string): SessionState {
  if (!hasNode(state.draft, from) || !hasNode(state.draft, to)) {
    return { ...state, notice: "both endpoints must exist before drawing an edge" };
  }
  if (from === to) {
    return { ...state, cyclePath: [from, from], notice: "self loops are not allowed" };
  }
  if (hasEdge(state.draft, from, to)) {
    return { ...state, notice: `edge ${from} -> ${to} already exists` };
  }
  const cycle = wouldCreateCycle(state.draft, from, to);
  if (cycle !== null) {
    return {
      ...state,
      cyclePath: cycle,
      notice: `edge ${from} -> ${to} would create a cycle: ${cycle.join(" -> ")}`,
    };
  }
  return withDraft(state, addEdge(state.draft, from, to));
}

export function gestureDeleteEdge(state: SessionState, from: string, to: string): SessionState {
  return withDraft(state, removeEdge(state.draft, from, to));
}

export function gestureMoveNode(state: SessionState, id: string, x: number, y: number): SessionState {
  if (!(id in state.layout)) {
    return state;
  }
  return { ...state, layout: { ...state.layout, [id]: { x, y } } };
}

export function gestureSelect(state: SessionState, id: string | null): SessionState {
  return { ...state, selected: id, overlay: null };
}

export function setPolicy(state: SessionState, policy: Policy): SessionState {
  return { ...state, policy };
}

export function clearTransients(state: SessionState): SessionState {
  return { ...state, cyclePath: null, notice: null };
}

// Role classes for the inspect overlay; the policy toggle narrows the
// allowed-read set to parents only.
export type NodeRole = "self" | "parent" | "child" | "spouse" | "allowed" | "none";

export function overlayRole(state: SessionState, nodeId: string): NodeRole {
  if (state.overlay === null) {
    return "none";
  }
  const { node, blanket } = state.overlay;
  if (nodeId === node) {
    return "self";
  }
  if (state.policy === "ParentsOnly") {
    return blanket.parents.includes(nodeId) ? "allowed" : "none";
  }
  if (blanket.parents.includes(nodeId)) {
    return "parent";
  }
  if (blanket.children.includes(nodeId)) {
    return "child";
  }
  if (blanket.spouses.includes(nodeId)) {
    return "spouse";
  }
  return "none";
}
