// Pure view description: the canvas render is a JSON element tree derived
// from session state, mounted onto real DOM by dom.ts. Keeping geometry and
// styling decisions here makes the whole visual layer snapshot-testable.

import { overlayRole, type NodeRole, type SessionState } from "./state.js";
import { styleFor } from "./violationStyles.js";

export interface ElementSpec {
  tag: string;
  attrs: Record<string, string>;
  children: ElementSpec[];
  text?: string;
}

export const NODE_RADIUS = 28;

const ROLE_FILL: Record<NodeRole, string> = {
  self: "#1565c0",
  parent: "#2e7d32",
  child: "#ef6c00",
  spouse: "#8e24aa",
  allowed: "#2e7d32",
  none: "#eceff1",
};

const ROLE_LABEL: Record<NodeRole, string> = {
  self: "selected",
  parent: "parent",
  child: "child",
  spouse: "spouse",
  allowed: "allowed read",
  none: "",
};

function el(tag: string, attrs: Record<string, string>, children: ElementSpec[] = [], text?: string): ElementSpec {
  return { tag, attrs, children, text };
}

function edgeKey(from: string, to: string): string {
  return `${from}->${to}`;
}

export function renderGraph(state: SessionState, width = 900, height = 560): ElementSpec {
  const doc = state.preview?.graph ?? state.draft;
  const ghostEdges = state.preview?.removedEdges ?? [];
  const cyclePairs = new Set<string>();
  if (state.cyclePath !== null) {
    for (let i = 0; i + 1 < state.cyclePath.length; i += 1) {
      cyclePairs.add(edgeKey(state.cyclePath[i], state.cyclePath[i + 1]));
    }
  }
  const pinned = new Map<string, string>();
  if (state.planReport !== null) {
    for (const violation of state.planReport.violations) {
      if (!pinned.has(violation.subject)) {
        pinned.set(violation.subject, violation.code);
      }
    }
  }

  const children: ElementSpec[] = [
    el("defs", {}, [
      el(
        "marker",
        {
          id: "arrow",
          viewBox: "0 0 10 10",
          refX: "9",
          refY: "5",
          markerWidth: "7",
          markerHeight: "7",
          orient: "auto-start-reverse",
        },
        [el("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#546e7a" })],
      ),
    ]),
  ];

  for (const edge of doc.edges) {
    children.push(renderEdge(state, edge.from, edge.to, false, cyclePairs.has(edgeKey(edge.from, edge.to))));
  }
  for (const ghost of ghostEdges) {
    children.push(renderEdge(state, ghost.from, ghost.to, true, false));
  }
  for (const node of doc.nodes) {
    children.push(renderNode(state, node.id, node.label, pinned.get(node.id)));
  }

  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      viewBox: `0 0 ${width} ${height}`,
      width: String(width),
      height: String(height),
      class: "graph-canvas",
    },
    children,
  );
}

function renderEdge(state: SessionState, from: string, to: string, ghost: boolean, inCycle: boolean): ElementSpec {
  const a = state.layout[from] ?? { x: 0, y: 0 };
  const b = state.layout[to] ?? { x: 0, y: 0 };
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const len = Math.max(Math.hypot(dx, dy), 1e-6);
  const trim = NODE_RADIUS + 4;
  const x2 = b.x - (dx / len) * trim;
  const y2 = b.y - (dy / len) * trim;
  const attrs: Record<string, string> = {
    x1: String(a.x),
    y1: String(a.y),
    x2: String(x2),
    y2: String(y2),
    stroke: ghost ? "#b0bec5" : inCycle ? styleFor("WouldCreateCycle").color : "#546e7a",
    "stroke-width": inCycle ? "3" : "2",
    "marker-end": "url(#arrow)",
    class: ghost ? "edge ghost" : inCycle ? "edge cycle-flash" : "edge",
    "data-edge": edgeKey(from, to),
  };
  if (ghost) {
    attrs["stroke-dasharray"] = "6 5";
  }
  return el("line", attrs);
}

function renderNode(state: SessionState, id: string, label: string, pinnedCode: string | undefined): ElementSpec {
  const pos = state.layout[id] ?? { x: 0, y: 0 };
  const role = overlayRole(state, id);
  const selected = state.selected === id;
  const interventionTarget = state.preview?.node === id;
  const parts: ElementSpec[] = [
    el("circle", {
      r: String(NODE_RADIUS),
      fill: ROLE_FILL[role],
      stroke: selected ? "#0d47a1" : "#455a64",
      "stroke-width": selected ? "3" : "1.5",
      class: `node-body role-${role}${interventionTarget ? " intervention-target" : ""}`,
    }),
    el(
      "text",
      { "text-anchor": "middle", dy: "0.35em", class: role === "none" ? "node-id" : "node-id inverted" },
      [],
      id,
    ),
  ];
  if (label !== "") {
    parts.push(el("text", { "text-anchor": "middle", y: String(NODE_RADIUS + 16), class: "node-label" }, [], label));
  }
  if (role !== "none" && ROLE_LABEL[role] !== "") {
    parts.push(
      el(
        "text",
        { "text-anchor": "middle", y: String(-NODE_RADIUS - 8), class: "role-tag" },
        [],
        ROLE_LABEL[role],
      ),
    );
  }
  if (pinnedCode !== undefined) {
    const style = styleFor(pinnedCode);
    parts.push(
      el("circle", {
        r: String(NODE_RADIUS + 6),
        fill: "none",
        stroke: style.color,
        "stroke-width": "2.5",
        "stroke-dasharray": style.shape === "dash" ? "4 3" : "",
        class: `violation-pin pin-${pinnedCode}`,
      }),
      el(
        "text",
        { x: String(NODE_RADIUS), y: String(-NODE_RADIUS), class: "violation-badge", fill: style.color },
        [],
        style.badge,
      ),
    );
  }
  return el(
    "g",
    { transform: `translate(${pos.x}, ${pos.y})`, "data-node": id, class: "node" },
    parts,
  );
}

export function renderLegend(state: SessionState): ElementSpec {
  const entries: [NodeRole, string][] =
    state.policy === "ParentsOnly"
      ? [
          ["self", ROLE_LABEL.self],
          ["allowed", ROLE_LABEL.allowed],
        ]
      : [
          ["self", ROLE_LABEL.self],
          ["parent", ROLE_LABEL.parent],
          ["child", ROLE_LABEL.child],
          ["spouse", ROLE_LABEL.spouse],
        ];
  return el(
    "ul",
    { class: "legend" },
    entries.map(([role, text]) =>
      el("li", { class: `legend-${role}` }, [
        el("span", { class: "swatch", style: `background:${ROLE_FILL[role]}` }),
        el("span", {}, [], text),
      ]),
    ),
  );
}
