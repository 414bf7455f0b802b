// Orchestrates the session: gestures mutate the local draft synchronously,
// server synchronization is explicit (Save, Inspect, Preview, Run). The DOM
// layer calls exactly these methods, so tests can drive the full editor
// behavior without a browser.

import { ApiError, GatewayClient } from "./api.js";
import { graphsEqual } from "./graph.js";
import type { LayoutStore } from "./layout.js";
import * as reducers from "./state.js";
import type { SessionState } from "./state.js";
import type { GraphDoc, NodeKind, PlanStepDoc, ShiftOverrides, WriteAck } from "./types.js";

export type SaveOutcome =
  | { kind: "saved"; ack: WriteAck }
  | { kind: "conflict"; currentRevision: number }
  | { kind: "rejected"; code: string; detail: string }
  | { kind: "noop" };

export class EditorController {
  state: SessionState = reducers.initialState();
  private mutationInFlight = false;

  constructor(
    private readonly client: GatewayClient,
    private readonly layouts: LayoutStore,
    private readonly onChange: (state: SessionState) => void = () => {},
  ) {}

  private commit(state: SessionState): void {
    this.state = state;
    if (state.graphId !== null) {
      this.layouts.save(state.graphId, state.layout);
    }
    this.onChange(state);
  }

  // --- local gestures -------------------------------------------------------

  newGraph(name: string): void {
    this.commit(reducers.newDraft(this.state, name));
  }

  addNodeGesture(id: string, x: number, y: number, kind: NodeKind = "generic", label = ""): void {
    this.commit(reducers.gestureAddNode(this.state, id, x, y, kind, label));
  }

  renameNodeGesture(oldId: string, newId: string): void {
    this.commit(reducers.gestureRenameNode(this.state, oldId, newId));
  }

  deleteNodeGesture(id: string): void {
    this.commit(reducers.gestureDeleteNode(this.state, id));
  }

  // Returns whether the edge was accepted; on refusal the cycle path is left
  // on state for the canvas to flash.
  drawEdgeGesture(from: string, to: string): boolean {
    const before = this.state.draft;
    this.commit(reducers.gestureDrawEdge(this.state, from, to));
    return this.state.draft !== before;
  }

  deleteEdgeGesture(from: string, to: string): void {
    this.commit(reducers.gestureDeleteEdge(this.state, from, to));
  }

  moveNodeGesture(id: string, x: number, y: number): void {
    this.commit(reducers.gestureMoveNode(this.state, id, x, y));
  }

  select(id: string | null): void {
    this.commit(reducers.gestureSelect(this.state, id));
  }

  setPolicy(policy: "ParentsOnly" | "MarkovBlanket"): void {
    this.commit(reducers.setPolicy(this.state, policy));
  }

  dismissTransients(): void {
    this.commit(reducers.clearTransients(this.state));
  }

  // --- server synchronization -------------------------------------------------

  private async mutate<T>(run: () => Promise<T>): Promise<T> {
    // at most one in-flight mutating request per session
    if (this.mutationInFlight) {
      throw new Error("a mutating request is already in flight");
    }
    this.mutationInFlight = true;
    try {
      return await run();
    } finally {
      this.mutationInFlight = false;
    }
  }

  async open(graphId: string): Promise<void> {
    const fetched = await this.client.getGraph(graphId);
    this.commit(
      reducers.loadGraph(this.state, graphId, fetched.revision, fetched.graph, this.layouts.load(graphId)),
    );
  }

  async save(): Promise<SaveOutcome> {
    if (!this.state.dirty) {
      return { kind: "noop" };
    }
    return this.mutate(async () => {
      try {
        const ack =
          this.state.graphId === null
            ? await this.client.createGraph(this.state.draft)
            : await this.client.updateGraph(this.state.graphId, this.state.draft, this.state.revision ?? 0);
        this.commit({
          ...this.state,
          graphId: ack.id,
          revision: ack.revision,
          dirty: false,
          conflict: null,
          notice: `saved revision ${ack.revision}`,
        });
        return { kind: "saved", ack };
      } catch (error) {
        if (error instanceof ApiError && error.status === 409) {
          const current = Number(error.body.current_revision ?? 0);
          this.commit({
            ...this.state,
            conflict: { currentRevision: current, detail: error.detail },
          });
          return { kind: "conflict", currentRevision: current };
        }
        if (error instanceof ApiError && error.status === 400) {
          const diagnostics = Array.isArray(error.body.diagnostics)
            ? (error.body.diagnostics as { code: string; message: string }[]).map((d) => ({
                code: d.code,
                message: d.message,
                involved: [],
              }))
            : [{ code: error.code, message: error.detail, involved: [] }];
          this.commit({ ...this.state, diagnostics });
          return { kind: "rejected", code: error.code, detail: error.detail };
        }
        throw error;
      }
    });
  }

  // Conflict resolution: reload the server copy (discarding the draft) or
  // overwrite it by retrying the save at the server's current revision.
  async resolveConflictByReload(): Promise<void> {
    const id = this.state.graphId;
    if (id === null) {
      return;
    }
    await this.open(id);
  }

  async resolveConflictByOverwrite(): Promise<SaveOutcome> {
    if (this.state.conflict === null) {
      return { kind: "noop" };
    }
    this.commit({ ...this.state, revision: this.state.conflict.currentRevision, conflict: null });
    return this.save();
  }

  // --- analysis views --------------------------------------------------------

  async inspectNode(nodeId: string): Promise<void> {
    const id = this.requireSaved("inspect");
    const blanket = await this.client.markovBlanket(id, nodeId);
    this.commit({ ...this.state, selected: nodeId, overlay: { node: nodeId, blanket } });
  }

  async previewIntervention(nodeId: string): Promise<void> {
    const id = this.requireSaved("preview an intervention on");
    const mutilated = await this.client.intervene(id, nodeId);
    const removedEdges = this.state.draft.edges.filter(
      (e) => !mutilated.edges.some((m) => m.from === e.from && m.to === e.to),
    );
    this.commit({
      ...this.state,
      preview: { node: nodeId, graph: mutilated, removedEdges },
      notice:
        removedEdges.length === 0
          ? `do(${nodeId}) preview, no effect: node has no parents (not saved)`
          : `do(${nodeId}) preview, not saved`,
    });
  }

  exitPreview(): void {
    this.commit({ ...this.state, preview: null, notice: null });
  }

  // Fork the current intervention preview into a new saved graph; the source
  // graph is never modified.
  async forkPreview(): Promise<WriteAck | null> {
    const preview = this.state.preview;
    if (preview === null) {
      return null;
    }
    return this.mutate(async () => {
      const doc: GraphDoc = { ...preview.graph, name: `${preview.graph.name || "graph"} do(${preview.node})` };
      const ack = await this.client.createGraph(doc);
      this.commit({ ...this.state, preview: null, notice: `forked as ${ack.id}` });
      return ack;
    });
  }

  async checkPlan(steps: PlanStepDoc[]): Promise<void> {
    const id = this.requireSaved("check a plan against");
    const report = await this.client.checkPlan(id, { steps }, this.state.policy);
    this.commit({ ...this.state, planReport: report });
  }

  async suggestOrder(modules: string[]): Promise<PlanStepDoc[]> {
    const id = this.requireSaved("suggest an order for");
    const plan = await this.client.suggestOrder(id, modules);
    return plan.steps;
  }

  async runExperiment(overrides: ShiftOverrides): Promise<void> {
    const report = await this.client.runShift(overrides);
    this.commit({ ...this.state, experiment: report });
  }

  // After any mutating call the UI refetches rather than trusting local
  // bookkeeping (polling consistency model). No-op for unsaved drafts.
  async refresh(): Promise<void> {
    if (this.state.graphId === null || this.state.dirty) {
      return;
    }
    const fetched = await this.client.getGraph(this.state.graphId);
    if (!graphsEqual(fetched.graph, this.state.draft) || fetched.revision !== this.state.revision) {
      this.commit(
        reducers.loadGraph(
          this.state,
          this.state.graphId,
          fetched.revision,
          fetched.graph,
          this.layouts.load(this.state.graphId),
        ),
      );
    }
  }

  private requireSaved(action: string): string {
    if (this.state.graphId === null) {
      throw new Error(`save the graph before trying to ${action} it`);
    }
    return this.state.graphId;
  }
}
