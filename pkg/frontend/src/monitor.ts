/**
 * Live view of one task.
 *
 * Polls GET /api/tasks/{id} once a second, mirrors the state machine as a
 * badge, and shows the newest convergence-trace entry while the task runs.
 * On done it fetches the result once and renders the trace chart, the
 * estimated-vs-truth comparator, the DAG, and the annotation panel; on
 * failed it shows the error payload with its stage tag. Polling stops at
 * terminal states. Several monitors can run side by side; all state is
 * per-instance.
 */

import { ApiClient, ApiError } from "./api.js";
import { AnnotationModel } from "./annotate.js";
import { renderDag } from "./dag.js";
import { renderComparator } from "./heatmap.js";
import { renderTraceChart } from "./trace.js";
import type { TaskRecord, TaskResult } from "./types.js";

export interface MonitorOptions {
  intervalMs?: number;
  navigate?: (hash: string) => void;
}

export interface Monitor {
  readonly id: string;
  /** One poll step; exposed so tests can drive the loop synchronously. */
  tick(): Promise<void>;
  stop(): void;
}

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function createMonitor(
  root: HTMLElement,
  api: ApiClient,
  id: string,
  opts: MonitorOptions = {},
): Monitor {
  const navigate = opts.navigate ?? ((hash: string) => (location.hash = hash));
  let timer: ReturnType<typeof setInterval> | null = null;
  let inFlight = false;
  let resultShown = false;

  root.innerHTML = "";
  const section = el("section", "monitor");
  const head = el("div", "monitor-head");
  head.appendChild(el("h2", "", `task ${id}`));
  const badge = el("span", "badge");
  badge.dataset.role = "badge";
  head.appendChild(badge);
  const parentSlot = el("span", "parent-link");
  parentSlot.dataset.role = "parent";
  head.appendChild(parentSlot);
  section.appendChild(head);
  const progress = el("div", "progress-line");
  progress.dataset.role = "progress";
  section.appendChild(progress);
  const errorPanel = el("div", "error-panel");
  errorPanel.dataset.role = "error";
  section.appendChild(errorPanel);
  const resultPanel = el("div", "result-panel");
  resultPanel.dataset.role = "result";
  section.appendChild(resultPanel);
  root.appendChild(section);

  function stop(): void {
    if (timer !== null) {
      clearInterval(timer);
      timer = null;
    }
  }

  function showNotFound(): void {
    root.innerHTML = "";
    const page = el("div", "not-found");
    page.appendChild(el("h2", "", "task not found"));
    page.appendChild(el("p", "", `no task with id '${id}'`));
    const back = el("a", "", "back to tasks");
    back.setAttribute("href", "#/");
    page.appendChild(back);
    root.appendChild(page);
  }

  function showError(record: TaskRecord): void {
    errorPanel.innerHTML = "";
    const err = record.error;
    if (!err) return;
    if (err.stage) {
      errorPanel.appendChild(el("span", "stage-tag", err.stage));
    }
    errorPanel.appendChild(el("span", "error-text", `${err.code}: ${err.message}`));
  }

  function renderAnnotator(): HTMLElement & { onCell(i: number, j: number): void } {
    const model = new AnnotationModel();
    let selected: [number, number] | null = null;
    const panel = el("div", "annotator");
    panel.appendChild(el("div", "panel-title", "annotations"));
    const selectedLine = el("div", "annotate-selected", "click a heatmap cell to pick an edge");
    selectedLine.dataset.role = "selected";
    panel.appendChild(selectedLine);
    const buttons = el("div", "annotate-buttons");
    const requireBtn = el("button", "", "require") as HTMLButtonElement;
    requireBtn.dataset.role = "require";
    requireBtn.disabled = true;
    const forbidBtn = el("button", "", "forbid") as HTMLButtonElement;
    forbidBtn.dataset.role = "forbid";
    forbidBtn.disabled = true;
    buttons.appendChild(requireBtn);
    buttons.appendChild(forbidBtn);
    panel.appendChild(buttons);
    const note = el("div", "annotate-note");
    note.dataset.role = "annotate-error";
    panel.appendChild(note);
    const pendingList = el("ul", "pending-list");
    pendingList.dataset.role = "pending";
    panel.appendChild(pendingList);
    const submit = el("button", "primary", "rerun with annotations") as HTMLButtonElement;
    submit.dataset.role = "submit-annotations";
    submit.disabled = true;
    panel.appendChild(submit);

    function refreshPending(): void {
      pendingList.innerHTML = "";
      for (const { i, j, action } of model.entries()) {
        const item = el("li", `pending-${action}`, `${action} x${i} → x${j} `);
        item.dataset.pair = `${i},${j}`;
        const drop = el("button", "link", "remove") as HTMLButtonElement;
        drop.addEventListener("click", () => {
          model.remove(i, j);
          refreshPending();
        });
        item.appendChild(drop);
        pendingList.appendChild(item);
      }
      submit.disabled = !model.canSubmit();
    }

    function mark(action: "require" | "forbid"): void {
      if (!selected) return;
      const err = model.add(selected[0], selected[1], action);
      note.textContent = err ?? "";
      refreshPending();
    }
    requireBtn.addEventListener("click", () => mark("require"));
    forbidBtn.addEventListener("click", () => mark("forbid"));
    submit.addEventListener("click", async () => {
      try {
        const created = await api.annotate(id, model.toDelta());
        navigate(`#/tasks/${created.id}`);
      } catch (err) {
        if (err instanceof ApiError) {
          note.textContent = `${err.code}: ${err.message}`;
          // point at the pairs the server named in the conflict message
          for (const item of Array.from(pendingList.children)) {
            const pair = (item as HTMLElement).dataset.pair ?? "";
            const [i, j] = pair.split(",");
            item.classList.toggle("conflict", err.message.includes(`(${i}, ${j})`));
          }
        } else {
          note.textContent = String(err);
        }
      }
    });

    return Object.assign(panel, {
      onCell(i: number, j: number): void {
        selected = [i, j];
        selectedLine.textContent = `selected: x${i} → x${j}`;
        requireBtn.disabled = false;
        forbidBtn.disabled = false;
      },
    });
  }

  function showResult(result: TaskResult): void {
    resultPanel.innerHTML = "";
    resultPanel.appendChild(
      el("div", "wall-clock", `finished in ${result.wall_clock.toFixed(2)}s`),
    );
    resultPanel.appendChild(renderTraceChart(result.trace));
    const annotator = renderAnnotator();
    resultPanel.appendChild(
      renderComparator(result, (i, j) => annotator.onCell(i, j)),
    );
    const dagBox = el("div", "dag-panel");
    dagBox.appendChild(el("div", "panel-title", "estimated graph"));
    dagBox.appendChild(renderDag(result.graph, result.graph_pre));
    resultPanel.appendChild(dagBox);
    resultPanel.appendChild(annotator);
  }

  async function tick(): Promise<void> {
    if (inFlight) return;
    inFlight = true;
    try {
      let record: TaskRecord;
      try {
        record = await api.getTask(id);
      } catch (err) {
        if (err instanceof ApiError && err.status === 404) {
          stop();
          showNotFound();
          return;
        }
        progress.textContent = `poll failed: ${String(err)}`;
        return; // transient; keep polling
      }
      badge.textContent = record.state;
      badge.className = `badge badge-${record.state}`;
      parentSlot.innerHTML = "";
      if (record.parent_id) {
        parentSlot.appendChild(document.createTextNode("derived from "));
        const link = el("a", "", record.parent_id);
        link.setAttribute("href", `#/tasks/${record.parent_id}`);
        parentSlot.appendChild(link);
      }
      progress.textContent = record.progress
        ? `latest: ${JSON.stringify(record.progress)}`
        : `state: ${record.state}`;
      if (record.state === "failed") {
        stop();
        showError(record);
      } else if (record.state === "done" && !resultShown) {
        resultShown = true;
        stop();
        showResult(await api.getResult(id));
      }
    } finally {
      inFlight = false;
    }
  }

  timer = setInterval(tick, opts.intervalMs ?? 1000);
  void tick();
  return { id, tick, stop };
}
