/**
 * Adjacency heatmaps and the estimated-vs-truth comparator.
 *
 * A heatmap is a (d+1) x (d+1) CSS grid: one corner spacer, axis labels on
 * the top row and left column, then d*d value cells. Cells carry data-i and
 * data-j so views can wire selection handlers, and a title tooltip naming
 * the edge and its value.
 */

import { binaryColor, divergingColor, isBinaryMatrix, sharedMaxAbs } from "./color.js";
import type { MetricsReport, TaskResult } from "./types.js";

export interface HeatmapOptions {
  title: string;
  labels: string[];
  palette: "diverging" | "binary";
  scale?: number;
  onCell?: (i: number, j: number, cell: HTMLElement) => void;
}

const METRIC_KEYS: (keyof MetricsReport)[] = [
  "fdr",
  "tpr",
  "fpr",
  "precision",
  "recall",
  "f1",
  "shd",
  "nnz",
  "gscore",
];

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function formatWeight(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(3);
}

export function renderHeatmap(M: number[][], opts: HeatmapOptions): HTMLElement {
  const d = M.length;
  const box = el("div", "heatmap");
  box.appendChild(el("div", "heatmap-title", opts.title));
  const grid = el("div", "heatmap-grid");
  grid.style.gridTemplateColumns = `repeat(${d + 1}, auto)`;
  grid.appendChild(el("div", "hm-corner"));
  for (let j = 0; j < d; j++) {
    grid.appendChild(el("div", "hm-label hm-col-label", opts.labels[j]));
  }
  for (let i = 0; i < d; i++) {
    grid.appendChild(el("div", "hm-label hm-row-label", opts.labels[i]));
    for (let j = 0; j < d; j++) {
      const v = M[i][j];
      const cell = el("div", "hm-cell");
      cell.dataset.i = String(i);
      cell.dataset.j = String(j);
      cell.style.backgroundColor =
        opts.palette === "binary" ? binaryColor(v) : divergingColor(v, opts.scale ?? 1);
      cell.title = `${opts.labels[i]} → ${opts.labels[j]}: ${formatWeight(v)}`;
      if (opts.onCell) {
        const handler = opts.onCell;
        cell.addEventListener("click", () => handler(i, j, cell));
      }
      grid.appendChild(cell);
    }
  }
  box.appendChild(grid);
  return box;
}

export function renderMetricsTable(metrics: MetricsReport): HTMLElement {
  const box = el("div", "metrics-panel");
  box.appendChild(el("div", "panel-title", "metrics"));
  const table = document.createElement("table");
  table.className = "metrics-table";
  for (const key of METRIC_KEYS) {
    const row = document.createElement("tr");
    row.appendChild(el("td", "metric-name", key));
    const value = el("td", "metric-value", String(metrics[key]));
    value.dataset.metric = key;
    row.appendChild(value);
    table.appendChild(row);
  }
  box.appendChild(table);
  return box;
}

/**
 * Side-by-side estimated-weights and truth heatmaps on one shared color
 * scale, plus the metrics table. Without a truth graph the comparator
 * degrades to the single estimated heatmap and no metrics panel.
 */
export function renderComparator(
  result: TaskResult,
  onCell?: HeatmapOptions["onCell"],
): HTMLElement {
  const est = result.graph_pre;
  const truth = result.truth;
  const d = est.length;
  const labels = Array.from({ length: d }, (_, i) => `x${i}`);
  const binary = isBinaryMatrix(est) && (truth === null || isBinaryMatrix(truth));
  const palette = binary ? ("binary" as const) : ("diverging" as const);
  const scale = sharedMaxAbs([est, truth]);

  const box = el("div", "comparator");
  const panels = el("div", "comparator-panels");
  panels.appendChild(
    renderHeatmap(est, { title: "estimated weights", labels, palette, scale, onCell }),
  );
  if (truth !== null) {
    panels.appendChild(renderHeatmap(truth, { title: "truth", labels, palette, scale }));
  }
  box.appendChild(panels);
  if (result.metrics !== null) {
    box.appendChild(renderMetricsTable(result.metrics));
  }
  return box;
}
