// Wire types for the gateway JSON API. Field names match the server schema
// exactly; these documents are sent and received verbatim.

export type NodeKind = "tool" | "llm" | "data" | "generic";

export interface GraphNode {
  id: string;
  kind: NodeKind;
  label: string;
}

export interface GraphEdge {
  from: string;
  to: string;
}

export interface GraphDoc {
  name: string;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface Diagnostic {
  code: string;
  message: string;
  involved: string[];
}

export interface ValidationDoc {
  ok: boolean;
  diagnostics: Diagnostic[];
}

export interface BlanketDoc {
  parents: string[];
  children: string[];
  spouses: string[];
  blanket: string[];
}

export interface PlanStepDoc {
  module: string;
  reads: string[];
}

export interface PlanDoc {
  steps: PlanStepDoc[];
}

export interface ViolationDoc {
  code: string;
  step_index: number;
  subject: string;
  detail: string;
}

export interface PlanReportDoc {
  ok: boolean;
  violations: ViolationDoc[];
}

export interface ModelResultDoc {
  train_accuracy: number;
  test_accuracy: number;
  weights: {
    bias: number;
    weights: number[];
    feature_names: string[];
    mask: boolean[];
  };
}

export interface ExperimentReportDoc {
  config: Record<string, unknown>;
  models: Record<string, ModelResultDoc>;
  generator_digest: string;
  error: string | null;
}

export interface GraphListEntry {
  id: string;
  name: string;
  revision: number;
  created_at: string;
  updated_at: string;
  nodes: number;
  edges: number;
}

export interface WriteAck {
  id: string;
  revision: number;
  validation: ValidationDoc;
}

export type Policy = "ParentsOnly" | "MarkovBlanket";

export interface ShiftOverrides {
  seed?: number;
  n_train?: number;
  n_test?: number;
  flip_prob?: number;
  spurious_strength?: number;
  spurious_noise_sd?: number;
}
