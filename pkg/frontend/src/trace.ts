/**
 * Convergence-trace chart.
 *
 * Trace entries differ by algorithm (objective/h records from the gradient
 * solvers, per-operator score records from GES, a causal-order record from
 * DirectLiNGAM), so the chart picks the first informative numeric series it
 * can find. One plotted point per served entry, always.
 */

import type { TraceEntry } from "./types.js";

const PREFERRED_KEYS = ["objective", "total", "h", "delta", "lr", "rho"];

const WIDTH = 480;
const HEIGHT = 160;
const PAD = 24;

/** Numeric value charted for one entry; 0 when the entry has none. */
export function traceValue(entry: TraceEntry): number {
  for (const key of PREFERRED_KEYS) {
    const v = entry[key];
    if (typeof v === "number" && Number.isFinite(v)) return v;
  }
  for (const v of Object.values(entry)) {
    if (typeof v === "number" && Number.isFinite(v)) return v;
  }
  return 0;
}

/** Name of the series traceValue would chart for these entries. */
export function traceSeriesName(trace: TraceEntry[]): string {
  for (const key of PREFERRED_KEYS) {
    if (trace.some((e) => typeof e[key] === "number")) return key;
  }
  return "entry";
}

export function renderTraceChart(trace: TraceEntry[]): HTMLElement {
  const box = document.createElement("div");
  box.className = "trace-chart";
  const title = document.createElement("div");
  title.className = "panel-title";
  title.textContent =
    trace.length === 0
      ? "trace (empty)"
      : `trace: ${traceSeriesName(trace)} over ${trace.length} entries`;
  box.appendChild(title);
  if (trace.length === 0) {
    return box;
  }

  const values = trace.map(traceValue);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  const step = trace.length > 1 ? (WIDTH - 2 * PAD) / (trace.length - 1) : 0;
  const px = (k: number) => PAD + k * step;
  const py = (v: number) => HEIGHT - PAD - ((v - lo) / span) * (HEIGHT - 2 * PAD);

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);

  if (trace.length > 1) {
    const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    line.setAttribute("class", "trace-line");
    line.setAttribute(
      "points",
      values.map((v, k) => `${px(k).toFixed(1)},${py(v).toFixed(1)}`).join(" "),
    );
    svg.appendChild(line);
  }
  values.forEach((v, k) => {
    const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    dot.setAttribute("class", "trace-point");
    dot.setAttribute("cx", px(k).toFixed(1));
    dot.setAttribute("cy", py(v).toFixed(1));
    dot.setAttribute("r", "3");
    const tip = document.createElementNS("http://www.w3.org/2000/svg", "title");
    tip.textContent = JSON.stringify(trace[k]);
    dot.appendChild(tip);
    svg.appendChild(dot);
  });
  box.appendChild(svg);
  return box;
}
