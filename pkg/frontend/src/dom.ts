// Thin DOM layer: mounts ElementSpec trees and wires pointer/form events to
// controller gestures. Everything interesting happens in the pure modules.

import type { ElementSpec } from "./render.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SVG_TAGS = new Set(["svg", "g", "circle", "line", "path", "text", "defs", "marker"]);

export function mount(spec: ElementSpec, doc: Document): Element {
  const node = SVG_TAGS.has(spec.tag)
    ? doc.createElementNS(SVG_NS, spec.tag)
    : doc.createElement(spec.tag);
  for (const [key, value] of Object.entries(spec.attrs)) {
    if (value !== "") {
      node.setAttribute(key, value);
    }
  }
  if (spec.text !== undefined) {
    node.textContent = spec.text;
  }
  for (const child of spec.children) {
    node.appendChild(mount(child, doc));
  }
  return node;
}

export function replaceChildrenWith(container: Element, spec: ElementSpec): void {
  container.replaceChildren(mount(spec, container.ownerDocument));
}

export interface DragCallbacks {
  onMove(nodeId: string, x: number, y: number): void;
  onConnect(fromId: string, toId: string): void;
  onSelect(nodeId: string | null): void;
}

// Pointer protocol: plain drag moves a node, Shift+drag draws an edge from
// the grabbed node to the drop target.
export function wireCanvas(svg: SVGSVGElement, callbacks: DragCallbacks): void {
  let dragging: string | null = null;
  let connecting: string | null = null;

  const nodeIdAt = (event: PointerEvent): string | null => {
    const target = event.target as Element | null;
    const group = target?.closest("[data-node]");
    return group?.getAttribute("data-node") ?? null;
  };

  const canvasPoint = (event: PointerEvent): { x: number; y: number } => {
    const rect = svg.getBoundingClientRect();
    const viewBox = svg.viewBox.baseVal;
    return {
      x: ((event.clientX - rect.left) / rect.width) * viewBox.width,
      y: ((event.clientY - rect.top) / rect.height) * viewBox.height,
    };
  };

  svg.addEventListener("pointerdown", (event) => {
    const id = nodeIdAt(event);
    callbacks.onSelect(id);
    if (id === null) {
      return;
    }
    if (event.shiftKey) {
      connecting = id;
    } else {
      dragging = id;
    }
    svg.setPointerCapture(event.pointerId);
  });

  svg.addEventListener("pointermove", (event) => {
    if (dragging !== null) {
      const point = canvasPoint(event);
      callbacks.onMove(dragging, point.x, point.y);
    }
  });

  svg.addEventListener("pointerup", (event) => {
    if (connecting !== null) {
      const drop = nodeIdAt(event);
      if (drop !== null && drop !== connecting) {
        callbacks.onConnect(connecting, drop);
      }
    }
    dragging = null;
    connecting = null;
  });
}
