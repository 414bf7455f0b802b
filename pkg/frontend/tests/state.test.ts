import { describe, expect, it } from "vitest";

import {
  gestureAddNode,
  gestureDeleteNode,
  gestureDrawEdge,
  gestureMoveNode,
  gestureRenameNode,
  initialState,
  overlayRole,
  setPolicy,
} from "../src/state.js";

function worldState() {
  let s = initialState();
  s = gestureAddNode(s, "C", 100, 100);
  s = gestureAddNode(s, "S", 250, 100);
  s = gestureAddNode(s, "Y", 175, 240);
  s = gestureDrawEdge(s, "C", "Y");
  return s;
}

describe("editing gestures", () => {
  it("builds a draft with layout and dirty flag", () => {
    const s = worldState();
    expect(s.draft.nodes.map((n) => n.id)).toEqual(["C", "S", "Y"]);
    expect(s.draft.edges).toEqual([{ from: "C", to: "Y" }]);
    expect(s.dirty).toBe(true);
    expect(s.layout.C).toEqual({ x: 100, y: 100 });
    expect(s.diagnostics).toEqual([]);
  });

  it("rejects a cycle-closing drag and exposes the path", () => {
    let s = worldState();
    s = gestureDrawEdge(s, "Y", "C");
    expect(s.draft.edges).toEqual([{ from: "C", to: "Y" }]); // unchanged
    expect(s.cyclePath).toEqual(["Y", "C", "Y"]);
    expect(s.notice).toContain("cycle");
  });

  it("rejects self loops inline", () => {
    let s = worldState();
    s = gestureDrawEdge(s, "C", "C");
    expect(s.cyclePath).toEqual(["C", "C"]);
    expect(s.draft.edges).toHaveLength(1);
  });

  it("rename moves layout and selection with the node", () => {
    let s = worldState();
    s = { ...s, selected: "C" };
    s = gestureRenameNode(s, "C", "Cause");
    expect(s.draft.edges).toEqual([{ from: "Cause", to: "Y" }]);
    expect(s.layout.Cause).toEqual({ x: 100, y: 100 });
    expect(s.layout.C).toBeUndefined();
    expect(s.selected).toBe("Cause");
  });

  it("delete removes incident edges and layout", () => {
    let s = worldState();
    s = gestureDeleteNode(s, "Y");
    expect(s.draft.edges).toEqual([]);
    expect(s.layout.Y).toBeUndefined();
  });

  it("move updates only the position", () => {
    let s = worldState();
    s = gestureMoveNode(s, "S", 300, 40);
    expect(s.layout.S).toEqual({ x: 300, y: 40 });
    expect(s.draft.nodes).toHaveLength(3);
  });

  it("bad identifiers surface in the local validation preview", () => {
    let s = initialState();
    s = gestureAddNode(s, "9bad", 10, 10);
    expect(s.diagnostics.map((d) => d.code)).toEqual(["BadIdentifier"]);
  });
});

describe("overlay roles", () => {
  const blanket = {
    parents: ["A", "B"],
    children: ["D"],
    spouses: ["E"],
    blanket: ["A", "B", "D", "E"],
  };

  it("blanket policy distinguishes parent, child, and spouse", () => {
    let s = initialState();
    s = setPolicy(s, "MarkovBlanket");
    s = { ...s, overlay: { node: "C", blanket } };
    expect(overlayRole(s, "C")).toBe("self");
    expect(overlayRole(s, "A")).toBe("parent");
    expect(overlayRole(s, "B")).toBe("parent");
    expect(overlayRole(s, "D")).toBe("child");
    expect(overlayRole(s, "E")).toBe("spouse");
    expect(overlayRole(s, "Z")).toBe("none");
  });

  it("parents-only policy narrows the allowed set", () => {
    let s = initialState();
    s = { ...s, overlay: { node: "C", blanket } };
    expect(overlayRole(s, "A")).toBe("allowed");
    expect(overlayRole(s, "D")).toBe("none");
    expect(overlayRole(s, "E")).toBe("none");
  });
});
