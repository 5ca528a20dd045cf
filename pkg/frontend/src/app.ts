/**
 * Single-page shell: hash routing between the task designer with the task
 * list (#/) and per-task monitors (#/tasks/{id}).
 *
 * The designer renders TaskFormModel into inputs, revalidates on every
 * input event, and keeps submit disabled until the body would be accepted
 * by the server. Field problems show inline next to the field; cross-field
 * problems show in the form banner; a server 400 that slips through lands
 * in the same banner with its error code.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  applyBenchmarkPreset,
  canSubmit,
  defaultForm,
  fieldErrors,
  formError,
  toSubmission,
} from "./form.js";
import type { TaskFormModel } from "./form.js";
import { createMonitor } from "./monitor.js";
import { ALGORITHMS, GRAPH_MODELS, NOISE_FAMILIES, SEM_KINDS } from "./types.js";
import type { TaskSummary } from "./types.js";
import { PARAM_KEYS } from "./validate.js";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

type FormKey = keyof TaskFormModel;

interface FieldSpec {
  key: FormKey;
  label: string;
  kind: "text" | "select" | "textarea";
  options?: readonly string[];
}

const SOURCE_FIELDS: FieldSpec[] = [
  { key: "model", label: "graph model", kind: "select", options: GRAPH_MODELS },
  { key: "d", label: "nodes (d)", kind: "text" },
  { key: "e", label: "edges (e)", kind: "text" },
  { key: "rank", label: "rank (low_rank only)", kind: "text" },
  { key: "weightLo", label: "weight low", kind: "text" },
  { key: "weightHi", label: "weight high", kind: "text" },
  { key: "graphSeed", label: "graph seed", kind: "text" },
  { key: "sem", label: "mechanism", kind: "select", options: SEM_KINDS },
  { key: "noiseFamily", label: "noise family", kind: "select", options: NOISE_FAMILIES },
  { key: "noiseScale", label: "noise scale", kind: "text" },
  { key: "n", label: "samples (n)", kind: "text" },
];

const CSV_FIELDS: FieldSpec[] = [
  { key: "csvPath", label: "csv path (on the server)", kind: "text" },
  { key: "truthPath", label: "truth graph path (optional)", kind: "text" },
];

const TASK_FIELDS: FieldSpec[] = [
  { key: "algorithm", label: "algorithm", kind: "select", options: ALGORITHMS },
  { key: "paramsText", label: "parameters (JSON)", kind: "textarea" },
  { key: "requiredText", label: "required edges (i->j ...)", kind: "text" },
  { key: "forbiddenText", label: "forbidden edges (i->j ...)", kind: "text" },
  { key: "nsMode", label: "neighborhood selection", kind: "select", options: ["off", "lasso"] },
  { key: "lambdaNs", label: "lasso lambda", kind: "text" },
  { key: "threshold", label: "threshold (optional)", kind: "text" },
  { key: "seed", label: "task seed", kind: "text" },
];

function renderDesigner(api: ApiClient, onSubmitted: (id: string) => void): HTMLElement {
  let form = defaultForm();
  const box = el("section", "designer");
  box.appendChild(el("h2", "", "design a task"));

  const banner = el("div", "form-banner");
  banner.dataset.role = "form-banner";
  const fieldsBox = el("div", "fields");
  const inputs = new Map<FormKey, HTMLInputElement | HTMLSelectElement | HTMLTextAreaElement>();
  const errSpans = new Map<FormKey, HTMLElement>();
  const groups = new Map<FormKey, HTMLElement>();

  function addField(spec: FieldSpec): void {
    const group = el("label", "field");
    group.appendChild(el("span", "field-label", spec.label));
    let input: HTMLInputElement | HTMLSelectElement | HTMLTextAreaElement;
    if (spec.kind === "select") {
      input = document.createElement("select");
      for (const option of spec.options ?? []) {
        const opt = document.createElement("option");
        opt.value = option;
        opt.textContent = option;
        input.appendChild(opt);
      }
    } else if (spec.kind === "textarea") {
      input = document.createElement("textarea");
      input.rows = 2;
    } else {
      input = document.createElement("input");
      input.type = "text";
    }
    input.dataset.field = spec.key;
    input.value = form[spec.key];
    input.addEventListener("input", () => {
      (form as Record<FormKey, string>)[spec.key] = input.value;
      refresh();
    });
    group.appendChild(input);
    const err = el("span", "field-error");
    err.dataset.err = spec.key;
    group.appendChild(err);
    fieldsBox.appendChild(group);
    inputs.set(spec.key, input);
    errSpans.set(spec.key, err);
    groups.set(spec.key, group);
  }

  const sourceToggle = el("div", "source-toggle");
  for (const kind of ["simulate", "csv"] as const) {
    const btn = el("button", "toggle", kind) as HTMLButtonElement;
    btn.dataset.source = kind;
    btn.addEventListener("click", () => {
      form.sourceKind = kind;
      refresh();
    });
    sourceToggle.appendChild(btn);
  }
  box.appendChild(sourceToggle);

  for (const spec of [...SOURCE_FIELDS, ...CSV_FIELDS, ...TASK_FIELDS]) {
    addField(spec);
  }
  box.appendChild(fieldsBox);

  const paramsHint = el("div", "hint");
  paramsHint.dataset.role = "params-hint";
  box.appendChild(paramsHint);
  box.appendChild(banner);

  const actions = el("div", "form-actions");
  const preset = el("button", "", "benchmark preset") as HTMLButtonElement;
  preset.dataset.role = "preset";
  preset.addEventListener("click", () => {
    form = applyBenchmarkPreset(form);
    for (const [key, input] of inputs) {
      input.value = form[key];
    }
    refresh();
  });
  actions.appendChild(preset);
  const submit = el("button", "primary", "launch task") as HTMLButtonElement;
  submit.dataset.role = "submit";
  submit.addEventListener("click", async () => {
    if (!canSubmit(form)) return; // inline validation already explains why
    const body = toSubmission(form);
    try {
      const created = await api.submitTask(body!);
      onSubmitted(created.id);
    } catch (err) {
      banner.textContent =
        err instanceof ApiError
          ? `submit failed (${err.code}): ${err.message}`
          : `submit failed: ${String(err)}`;
    }
  });
  actions.appendChild(submit);
  box.appendChild(actions);

  function refresh(): void {
    const errs = fieldErrors(form);
    for (const [key, span] of errSpans) {
      span.textContent = errs[key] ?? "";
    }
    const simulate = form.sourceKind === "simulate";
    for (const spec of SOURCE_FIELDS) {
      groups.get(spec.key)!.style.display = simulate ? "" : "none";
    }
    for (const spec of CSV_FIELDS) {
      groups.get(spec.key)!.style.display = simulate ? "none" : "";
    }
    for (const btn of Array.from(sourceToggle.children)) {
      const target = (btn as HTMLElement).dataset.source;
      btn.classList.toggle("active", target === form.sourceKind);
    }
    (inputs.get("lambdaNs") as HTMLInputElement).disabled = form.nsMode !== "lasso";
    paramsHint.textContent = `parameters for ${form.algorithm}: ${PARAM_KEYS[
      form.algorithm
    ]?.join(", ")}`;
    banner.textContent = Object.keys(errs).length === 0 ? (formError(form) ?? "") : "";
    submit.disabled = !canSubmit(form);
  }
  refresh();
  return box;
}

function renderTaskList(api: ApiClient): { box: HTMLElement; stop(): void } {
  const box = el("section", "task-list");
  box.appendChild(el("h2", "", "tasks"));
  const note = el("div", "list-note");
  box.appendChild(note);
  const list = el("ul", "tasks");
  list.dataset.role = "task-list";
  box.appendChild(list);

  function row(task: TaskSummary): HTMLElement {
    const item = el("li", `task-row state-${task.state}`);
    const link = el("a", "task-id", task.id);
    link.setAttribute("href", `#/tasks/${task.id}`);
    item.appendChild(link);
    item.appendChild(el("span", "task-algo", task.algorithm));
    item.appendChild(el("span", `badge badge-${task.state}`, task.state));
    if (task.parent_id) {
      item.appendChild(el("span", "task-parent", `from ${task.parent_id}`));
    }
    const drop = el("button", "link", "delete") as HTMLButtonElement;
    drop.addEventListener("click", async () => {
      try {
        await api.deleteTask(task.id);
        note.textContent = "";
      } catch (err) {
        note.textContent = err instanceof ApiError ? err.message : String(err);
      }
      await refresh();
    });
    item.appendChild(drop);
    return item;
  }

  async function refresh(): Promise<void> {
    try {
      const { tasks } = await api.listTasks();
      list.innerHTML = "";
      for (const task of tasks) {
        list.appendChild(row(task));
      }
    } catch (err) {
      note.textContent = `could not load tasks: ${String(err)}`;
    }
  }
  void refresh();
  const timer = setInterval(refresh, 2000);
  return { box, stop: () => clearInterval(timer) };
}

/** Mount the app on root; returns a teardown that stops pollers. */
export function startApp(root: HTMLElement, api: ApiClient = new ApiClient()): () => void {
  let cleanup: (() => void) | null = null;

  function route(): void {
    cleanup?.();
    cleanup = null;
    root.innerHTML = "";
    const match = /^#\/tasks\/([A-Za-z0-9_-]+)$/.exec(location.hash);
    if (match) {
      const monitor = createMonitor(root, api, match[1]);
      cleanup = () => monitor.stop();
      return;
    }
    const home = el("div", "home");
    const designer = renderDesigner(api, (id) => {
      location.hash = `#/tasks/${id}`;
    });
    const tasks = renderTaskList(api);
    home.appendChild(designer);
    home.appendChild(tasks.box);
    root.appendChild(home);
    cleanup = tasks.stop;
  }

  window.addEventListener("hashchange", route);
  route();
  return () => {
    window.removeEventListener("hashchange", route);
    cleanup?.();
    cleanup = null;
  };
}
