// Pure builders for the experiment console and plan panel: bar geometry from
// an experiment report, and violation pins tying report rows to plan steps
// and canvas nodes.

import type { ExperimentReportDoc, PlanReportDoc } from "./types.js";

export interface Bar {
  model: string;
  env: "train" | "test";
  value: number; // accuracy fraction, exactly as reported by the API
}

export function experimentBars(report: ExperimentReportDoc): Bar[] {
  const bars: Bar[] = [];
  for (const model of Object.keys(report.models).sort()) {
    const result = report.models[model];
    bars.push({ model, env: "train", value: result.train_accuracy });
    bars.push({ model, env: "test", value: result.test_accuracy });
  }
  return bars;
}

export interface ViolationPin {
  stepIndex: number;
  nodeId: string;
  code: string;
  detail: string;
}

// Each violation pins to its step row and to the canvas element it names:
// the offending read (subject) when it exists, else the step's module.
export function violationPins(report: PlanReportDoc): ViolationPin[] {
  return report.violations.map((v) => ({
    stepIndex: v.step_index,
    nodeId: v.subject,
    code: v.code,
    detail: v.detail,
  }));
}

export function formatPercent(value: number): string {
  return `${(value * 100).toFixed(1)}%`;
}
