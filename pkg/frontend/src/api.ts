// Typed client for the gateway. The fetch implementation is injected so the
// controller can be exercised against a stub transport in tests.

import type {
  BlanketDoc,
  ExperimentReportDoc,
  GraphDoc,
  GraphListEntry,
  PlanDoc,
  PlanReportDoc,
  Policy,
  ShiftOverrides,
  ValidationDoc,
  WriteAck,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    public readonly detail: string,
    public readonly body: Record<string, unknown>,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function fail(response: Response): Promise<never> {
  let body: Record<string, unknown> = {};
  try {
    body = (await response.json()) as Record<string, unknown>;
  } catch {
    // non-JSON error body; keep the defaults
  }
  throw new ApiError(
    response.status,
    typeof body.code === "string" ? body.code : "UnknownError",
    typeof body.detail === "string" ? body.detail : response.statusText,
    body,
  );
}

export interface FetchedGraph {
  graph: GraphDoc;
  revision: number;
}

export class GatewayClient {
  constructor(
    public readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      await fail(response);
    }
    return response;
  }

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    return (await (await this.request(path, init)).json()) as T;
  }

  private jsonInit(method: string, payload: unknown, headers: Record<string, string> = {}): RequestInit {
    return {
      method,
      headers: { "Content-Type": "application/json", ...headers },
      body: JSON.stringify(payload),
    };
  }

  health(): Promise<{ status: string; version: string }> {
    return this.requestJson("/health");
  }

  async listGraphs(): Promise<GraphListEntry[]> {
    const body = await this.requestJson<{ graphs: GraphListEntry[] }>("/graphs");
    return body.graphs;
  }

  async getGraph(id: string): Promise<FetchedGraph> {
    const response = await this.request(`/graphs/${id}`);
    const etag = response.headers.get("ETag") ?? "0";
    return {
      graph: (await response.json()) as GraphDoc,
      revision: Number(etag.replaceAll('"', "")),
    };
  }

  createGraph(doc: GraphDoc): Promise<WriteAck> {
    return this.requestJson("/graphs", this.jsonInit("POST", doc));
  }

  updateGraph(id: string, doc: GraphDoc, revision: number): Promise<WriteAck> {
    return this.requestJson(
      `/graphs/${id}`,
      this.jsonInit("PUT", doc, { "If-Match": String(revision) }),
    );
  }

  async deleteGraph(id: string): Promise<void> {
    await this.request(`/graphs/${id}`, { method: "DELETE" });
  }

  validate(id: string): Promise<ValidationDoc> {
    return this.requestJson(`/graphs/${id}/validate`);
  }

  markovBlanket(id: string, node: string): Promise<BlanketDoc> {
    return this.requestJson(`/graphs/${id}/nodes/${node}/markov-blanket`);
  }

  intervene(id: string, node: string): Promise<GraphDoc> {
    return this.requestJson(`/graphs/${id}/intervene`, this.jsonInit("POST", { node }));
  }

  checkPlan(id: string, plan: PlanDoc, policy: Policy): Promise<PlanReportDoc> {
    return this.requestJson(`/graphs/${id}/plan-check`, this.jsonInit("POST", { plan, policy }));
  }

  suggestOrder(id: string, modules: string[]): Promise<PlanDoc> {
    return this.requestJson(`/graphs/${id}/suggest-order`, this.jsonInit("POST", { modules }));
  }

  runShift(overrides: ShiftOverrides): Promise<ExperimentReportDoc> {
    return this.requestJson("/experiments/shift", this.jsonInit("POST", overrides));
  }
}

// Build-time default with a runtime override, for static hosting next to any
// gateway instance.
export function resolveBaseUrl(): string {
  const w = globalThis as { CVP_GATEWAY_URL?: string };
  return w.CVP_GATEWAY_URL ?? "";
}
