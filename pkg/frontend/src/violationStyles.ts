// One distinct visual treatment per violation/diagnostic code, used for
// inline markers on the canvas, step rows, and diagnostic lists. The mapping
// is data so tests can assert coverage and pairwise distinctness.

export interface VisualTreatment {
  color: string;
  badge: string;
  shape: "ring" | "underline" | "hatch" | "dash" | "dot" | "cross";
  summary: string;
}

export const VIOLATION_STYLES: Record<string, VisualTreatment> = {
  // plan-filter violation codes
  UnknownModule: {
    color: "#7b1fa2",
    badge: "?",
    shape: "cross",
    summary: "references a module missing from the graph",
  },
  SpuriousDependency: {
    color: "#d32f2f",
    badge: "S!",
    shape: "ring",
    summary: "reads outside the causally anchored set",
  },
  OrderViolation: {
    color: "#e65100",
    badge: "⇄",
    shape: "underline",
    summary: "reads a module that has not executed yet",
  },
  DuplicateExecution: {
    color: "#00695c",
    badge: "x2",
    shape: "hatch",
    summary: "module executes more than once",
  },
  SelfRead: {
    color: "#5d4037",
    badge: "↺",
    shape: "dot",
    summary: "step reads its own module",
  },
  // graph diagnostics
  CycleDetected: {
    color: "#c2185b",
    badge: "⟳",
    shape: "dash",
    summary: "directed cycle in the causal graph",
  },
  WouldCreateCycle: {
    color: "#ad1457",
    badge: "⟳+",
    shape: "dash",
    summary: "edge would close a directed cycle",
  },
  UnknownNodeRef: {
    color: "#6a1b9a",
    badge: "?n",
    shape: "cross",
    summary: "edge endpoint is not a declared node",
  },
  SelfLoop: {
    color: "#4e342e",
    badge: "↻",
    shape: "dot",
    summary: "edge from a node to itself",
  },
  DuplicateEdge: {
    color: "#00838f",
    badge: "=2",
    shape: "hatch",
    summary: "edge declared twice",
  },
  DuplicateNode: {
    color: "#2e7d32",
    badge: "n2",
    shape: "hatch",
    summary: "node id declared twice",
  },
  BadIdentifier: {
    color: "#f57f17",
    badge: "id",
    shape: "underline",
    summary: "node id violates the identifier pattern",
  },
  // text/JSON format diagnostics
  UnexpectedToken: {
    color: "#37474f",
    badge: "tok",
    shape: "underline",
    summary: "malformed statement or document",
  },
  UnterminatedString: {
    color: "#827717",
    badge: '"…',
    shape: "underline",
    summary: "string missing its closing quote",
  },
};

export function styleFor(code: string): VisualTreatment {
  return (
    VIOLATION_STYLES[code] ?? {
      color: "#424242",
      badge: "!",
      shape: "ring",
      summary: code,
    }
  );
}
