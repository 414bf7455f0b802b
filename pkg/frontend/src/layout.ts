// Node positions are UI-local state: persisted per graph id in browser
// storage and never sent to the server, whose graph schema has no layout.

export interface Position {
  x: number;
  y: number;
}

export type LayoutMap = Record<string, Position>;

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const PREFIX = "cvp-layout:";

export class LayoutStore {
  constructor(private readonly storage: StorageLike) {}

  load(graphId: string): LayoutMap {
    const raw = this.storage.getItem(PREFIX + graphId);
    if (raw === null) {
      return {};
    }
    try {
      const parsed = JSON.parse(raw) as LayoutMap;
      return typeof parsed === "object" && parsed !== null ? parsed : {};
    } catch {
      return {};
    }
  }

  save(graphId: string, layout: LayoutMap): void {
    this.storage.setItem(PREFIX + graphId, JSON.stringify(layout));
  }
}

export class MemoryStorage implements StorageLike {
  private readonly items = new Map<string, string>();

  getItem(key: string): string | null {
    return this.items.get(key) ?? null;
  }

  setItem(key: string, value: string): void {
    this.items.set(key, value);
  }
}

// Deterministic fallback placement for nodes that have never been dragged:
// a simple grid below any already-placed nodes.
export function placeMissing(layout: LayoutMap, nodeIds: string[]): LayoutMap {
  const out: LayoutMap = { ...layout };
  let slot = 0;
  for (const id of nodeIds) {
    if (!(id in out)) {
      out[id] = { x: 80 + (slot % 5) * 140, y: 80 + Math.floor(slot / 5) * 110 };
      slot += 1;
    }
  }
  return out;
}
