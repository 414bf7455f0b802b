// Application bootstrap: builds the controller, renders on every state
// change, and wires toolbar/panel inputs to controller methods.

import { GatewayClient, resolveBaseUrl } from "./api.js";
import { formatPercent, experimentBars, violationPins } from "./console.js";
import { EditorController } from "./controller.js";
import { replaceChildrenWith, wireCanvas } from "./dom.js";
import { LayoutStore } from "./layout.js";
import { renderGraph, renderLegend } from "./render.js";
import { styleFor } from "./violationStyles.js";
import type { PlanStepDoc } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const client = new GatewayClient(resolveBaseUrl());
const controller = new EditorController(client, new LayoutStore(window.localStorage), render);

const canvasHost = byId<HTMLDivElement>("canvas-host");
const legendHost = byId<HTMLDivElement>("legend");
const noticeHost = byId<HTMLDivElement>("notice");
const diagnosticsHost = byId<HTMLUListElement>("diagnostics");
const sidebarHost = byId<HTMLUListElement>("graph-list");
const planRows = byId<HTMLTableSectionElement>("plan-rows");
const resultsHost = byId<HTMLDivElement>("experiment-results");

const planSteps: PlanStepDoc[] = [];

function render(): void {
  const state = controller.state;
  replaceChildrenWith(canvasHost, renderGraph(state));
  replaceChildrenWith(legendHost, renderLegend(state));
  const svg = canvasHost.querySelector("svg");
  if (svg !== null) {
    wireCanvas(svg as SVGSVGElement, {
      onMove: (id, x, y) => controller.moveNodeGesture(id, x, y),
      onConnect: (from, to) => controller.drawEdgeGesture(from, to),
      onSelect: (id) => controller.select(id),
    });
  }

  noticeHost.textContent = state.notice ?? (state.dirty ? "unsaved changes" : "");
  noticeHost.className = state.conflict !== null ? "notice conflict" : "notice";
  if (state.conflict !== null) {
    noticeHost.textContent =
      `save conflict: server is at revision ${state.conflict.currentRevision}; ` +
      "Reload to take the server copy or Overwrite to replace it";
  }

  diagnosticsHost.replaceChildren(
    ...state.diagnostics.map((diag) => {
      const item = document.createElement("li");
      const style = styleFor(diag.code);
      item.style.borderLeft = `4px solid ${style.color}`;
      item.textContent = `${style.badge} ${diag.code}: ${diag.message}`;
      return item;
    }),
  );

  renderPlanPanel();
  renderExperiment();
}

function renderPlanPanel(): void {
  const report = controller.state.planReport;
  const pins = report === null ? [] : violationPins(report);
  planRows.replaceChildren(
    ...planSteps.map((step, index) => {
      const row = document.createElement("tr");
      const cell = document.createElement("td");
      cell.textContent = `${index}: ${step.module} reads {${step.reads.join(", ")}}`;
      const badges = document.createElement("td");
      for (const pin of pins.filter((p) => p.stepIndex === index)) {
        const badge = document.createElement("span");
        const style = styleFor(pin.code);
        badge.className = "pin";
        badge.style.background = style.color;
        badge.title = pin.detail;
        badge.textContent = `${style.badge} ${pin.code}(${pin.nodeId})`;
        badges.appendChild(badge);
      }
      row.append(cell, badges);
      return row;
    }),
  );
}

function renderExperiment(): void {
  const report = controller.state.experiment;
  if (report === null) {
    return;
  }
  resultsHost.replaceChildren();
  const chart = document.createElement("div");
  chart.className = "bars";
  for (const bar of experimentBars(report)) {
    const column = document.createElement("div");
    column.className = `bar ${bar.env}`;
    column.style.height = `${Math.round(bar.value * 220)}px`;
    column.title = `${bar.model} ${bar.env}: ${formatPercent(bar.value)}`;
    const tag = document.createElement("span");
    tag.textContent = `${bar.model.slice(0, 5)}/${bar.env}: ${formatPercent(bar.value)}`;
    column.appendChild(tag);
    chart.appendChild(column);
  }
  resultsHost.appendChild(chart);

  const table = document.createElement("table");
  for (const [model, result] of Object.entries(report.models)) {
    const row = table.insertRow();
    row.insertCell().textContent = model;
    row.insertCell().textContent = formatPercent(result.train_accuracy);
    row.insertCell().textContent = formatPercent(result.test_accuracy);
  }
  resultsHost.appendChild(table);
}

async function refreshSidebar(): Promise<void> {
  const entries = await client.listGraphs();
  sidebarHost.replaceChildren(
    ...entries.map((entry) => {
      const item = document.createElement("li");
      const link = document.createElement("a");
      link.href = "#";
      link.textContent = `${entry.name || "(unnamed)"} [${entry.id}] r${entry.revision}`;
      link.addEventListener("click", (event) => {
        event.preventDefault();
        void controller.open(entry.id);
      });
      item.appendChild(link);
      return item;
    }),
  );
}

function wireToolbar(): void {
  byId<HTMLButtonElement>("btn-new").addEventListener("click", () => {
    const name = byId<HTMLInputElement>("graph-name").value;
    controller.newGraph(name);
  });
  byId<HTMLButtonElement>("btn-add-node").addEventListener("click", () => {
    const id = byId<HTMLInputElement>("node-id").value.trim();
    if (id !== "") {
      controller.addNodeGesture(id, 120 + Math.random() * 500, 90 + Math.random() * 350);
    }
  });
  byId<HTMLButtonElement>("btn-save").addEventListener("click", () => {
    void controller.save().then(refreshSidebar);
  });
  byId<HTMLButtonElement>("btn-reload").addEventListener("click", () => {
    void controller.resolveConflictByReload();
  });
  byId<HTMLButtonElement>("btn-overwrite").addEventListener("click", () => {
    void controller.resolveConflictByOverwrite();
  });
  byId<HTMLButtonElement>("btn-inspect").addEventListener("click", () => {
    const selected = controller.state.selected;
    if (selected !== null) {
      void controller.inspectNode(selected);
    }
  });
  byId<HTMLButtonElement>("btn-intervene").addEventListener("click", () => {
    const selected = controller.state.selected;
    if (selected !== null) {
      void controller.previewIntervention(selected);
    }
  });
  byId<HTMLButtonElement>("btn-exit-preview").addEventListener("click", () => controller.exitPreview());
  byId<HTMLButtonElement>("btn-fork").addEventListener("click", () => {
    void controller.forkPreview().then(refreshSidebar);
  });
  byId<HTMLSelectElement>("policy").addEventListener("change", (event) => {
    controller.setPolicy((event.target as HTMLSelectElement).value as "ParentsOnly" | "MarkovBlanket");
  });

  byId<HTMLButtonElement>("btn-plan-add").addEventListener("click", () => {
    const module = byId<HTMLInputElement>("plan-module").value.trim();
    const reads = byId<HTMLInputElement>("plan-reads")
      .value.split(",")
      .map((s) => s.trim())
      .filter((s) => s !== "");
    if (module !== "") {
      planSteps.push({ module, reads });
      render();
    }
  });
  byId<HTMLButtonElement>("btn-plan-check").addEventListener("click", () => {
    void controller.checkPlan(planSteps);
  });
  byId<HTMLButtonElement>("btn-plan-clear").addEventListener("click", () => {
    planSteps.length = 0;
    controller.state.planReport = null;
    render();
  });

  byId<HTMLButtonElement>("btn-run").addEventListener("click", () => {
    const read = (id: string): number => Number(byId<HTMLInputElement>(id).value);
    void controller.runExperiment({
      seed: read("exp-seed"),
      spurious_strength: read("exp-alpha"),
      spurious_noise_sd: read("exp-sigma"),
      flip_prob: read("exp-flip"),
    });
  });
}

wireToolbar();
render();
void refreshSidebar();
void client.health().then((h) => {
  byId<HTMLSpanElement>("health").textContent = `gateway ok (v${h.version})`;
});
