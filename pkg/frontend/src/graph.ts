// Client-side graph operations over the wire document shape. All functions
// are pure: drafts are never mutated in place, which keeps undoable editor
// state trivial to reason about.

import type { Diagnostic, GraphDoc, GraphNode, NodeKind } from "./types.js";

export const IDENT_RE = /^[A-Za-z_][A-Za-z0-9_]*$/;

export function emptyGraph(name = ""): GraphDoc {
  return { name, nodes: [], edges: [] };
}

export function cloneGraph(doc: GraphDoc): GraphDoc {
  return {
    name: doc.name,
    nodes: doc.nodes.map((n) => ({ ...n })),
    edges: doc.edges.map((e) => ({ ...e })),
  };
}

export function hasNode(doc: GraphDoc, id: string): boolean {
  return doc.nodes.some((n) => n.id === id);
}

export function hasEdge(doc: GraphDoc, from: string, to: string): boolean {
  return doc.edges.some((e) => e.from === from && e.to === to);
}

export function addNode(doc: GraphDoc, id: string, kind: NodeKind = "generic", label = ""): GraphDoc {
  return { ...cloneGraph(doc), nodes: [...doc.nodes.map((n) => ({ ...n })), { id, kind, label }] };
}

export function removeNode(doc: GraphDoc, id: string): GraphDoc {
  return {
    name: doc.name,
    nodes: doc.nodes.filter((n) => n.id !== id).map((n) => ({ ...n })),
    edges: doc.edges.filter((e) => e.from !== id && e.to !== id).map((e) => ({ ...e })),
  };
}

// Rename atomically: every referencing edge follows the new id.
export function renameNode(doc: GraphDoc, oldId: string, newId: string): GraphDoc {
  return {
    name: doc.name,
    nodes: doc.nodes.map((n) => (n.id === oldId ? { ...n, id: newId } : { ...n })),
    edges: doc.edges.map((e) => ({
      from: e.from === oldId ? newId : e.from,
      to: e.to === oldId ? newId : e.to,
    })),
  };
}

export function setNodeMeta(doc: GraphDoc, id: string, meta: Partial<Pick<GraphNode, "kind" | "label">>): GraphDoc {
  return {
    ...cloneGraph(doc),
    nodes: doc.nodes.map((n) => (n.id === id ? { ...n, ...meta } : { ...n })),
  };
}

export function addEdge(doc: GraphDoc, from: string, to: string): GraphDoc {
  return { ...cloneGraph(doc), edges: [...doc.edges.map((e) => ({ ...e })), { from, to }] };
}

export function removeEdge(doc: GraphDoc, from: string, to: string): GraphDoc {
  return {
    ...cloneGraph(doc),
    edges: doc.edges.filter((e) => !(e.from === from && e.to === to)).map((e) => ({ ...e })),
  };
}

function childrenOf(doc: GraphDoc, id: string): string[] {
  return doc.edges.filter((e) => e.from === id).map((e) => e.to);
}

// The cycle a new edge from->to would close, as a node path starting and
// ending at `from` (matching the server's cycle-path shape), or null.
export function wouldCreateCycle(doc: GraphDoc, from: string, to: string): string[] | null {
  if (from === to) {
    return [from, from];
  }
  const previous = new Map<string, string>();
  const queue = [to];
  const seen = new Set([to]);
  while (queue.length > 0) {
    const current = queue.shift() as string;
    for (const next of childrenOf(doc, current).sort()) {
      if (seen.has(next)) {
        continue;
      }
      previous.set(next, current);
      if (next === from) {
        // walk the BFS tree back from `from` to `to`, then close the loop
        const back = [from];
        let cursor = from;
        while (cursor !== to) {
          cursor = previous.get(cursor) as string;
          back.push(cursor);
        }
        back.reverse(); // [to, ..., from]
        return [from, ...back];
      }
      seen.add(next);
      queue.push(next);
    }
  }
  return null;
}

// Local mirror of the server-side validation preview so every gesture can be
// checked without a round trip; the server remains the authority on save.
export function validateDraft(doc: GraphDoc): Diagnostic[] {
  const diagnostics: Diagnostic[] = [];
  const seen = new Set<string>();
  for (const node of doc.nodes) {
    if (!IDENT_RE.test(node.id)) {
      diagnostics.push({ code: "BadIdentifier", message: `invalid module id '${node.id}'`, involved: [node.id] });
    }
    if (seen.has(node.id)) {
      diagnostics.push({ code: "DuplicateNode", message: `duplicate module id '${node.id}'`, involved: [node.id] });
    }
    seen.add(node.id);
  }
  const seenEdges = new Set<string>();
  let edgesSound = true;
  for (const edge of doc.edges) {
    const ref = `${edge.from}->${edge.to}`;
    for (const endpoint of [edge.from, edge.to]) {
      if (!seen.has(endpoint)) {
        diagnostics.push({ code: "UnknownNodeRef", message: `edge ${ref} references unknown node '${endpoint}'`, involved: [ref] });
        edgesSound = false;
      }
    }
    if (edge.from === edge.to) {
      diagnostics.push({ code: "SelfLoop", message: `self loop ${ref}`, involved: [ref] });
      edgesSound = false;
    }
    if (seenEdges.has(ref)) {
      diagnostics.push({ code: "DuplicateEdge", message: `duplicate edge ${ref}`, involved: [ref] });
    }
    seenEdges.add(ref);
  }
  if (edgesSound) {
    const cycle = findCycle(doc);
    if (cycle !== null) {
      diagnostics.push({ code: "CycleDetected", message: `cycle ${cycle.join(" -> ")}`, involved: cycle });
    }
  }
  return diagnostics;
}

function findCycle(doc: GraphDoc): string[] | null {
  const WHITE = 0;
  const GRAY = 1;
  const BLACK = 2;
  const color = new Map<string, number>(doc.nodes.map((n) => [n.id, WHITE]));
  const path: string[] = [];

  const visit = (id: string): string[] | null => {
    color.set(id, GRAY);
    path.push(id);
    for (const child of childrenOf(doc, id).sort()) {
      if (!color.has(child)) {
        continue;
      }
      if (color.get(child) === GRAY) {
        return [...path.slice(path.indexOf(child)), child];
      }
      if (color.get(child) === WHITE) {
        const found = visit(child);
        if (found !== null) {
          return found;
        }
      }
    }
    path.pop();
    color.set(id, BLACK);
    return null;
  };

  for (const node of doc.nodes) {
    if (color.get(node.id) === WHITE) {
      const found = visit(node.id);
      if (found !== null) {
        return found;
      }
    }
  }
  return null;
}

export function graphsEqual(a: GraphDoc, b: GraphDoc): boolean {
  const canon = (doc: GraphDoc): string =>
    JSON.stringify({
      name: doc.name,
      nodes: doc.nodes,
      edges: [...doc.edges].sort((x, y) => x.from.localeCompare(y.from) || x.to.localeCompare(y.to)),
    });
  return canon(a) === canon(b);
}
