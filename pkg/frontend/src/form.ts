/**
 * Task designer form model.
 *
 * The model keeps raw input strings so the view can round-trip exactly what
 * the user typed; parsing happens in fieldErrors/toSubmission. Submission is
 * allowed only when per-field parsing succeeds and the assembled body passes
 * validateSubmission, the same check the server applies, so a submit never
 * bounces for a reason the form could have caught.
 */

import type { PriorEdges, TaskSubmission } from "./types.js";
import { validateSubmission } from "./validate.js";

export interface TaskFormModel {
  sourceKind: "simulate" | "csv";
  model: string;
  d: string;
  e: string;
  rank: string;
  weightLo: string;
  weightHi: string;
  graphSeed: string;
  sem: string;
  noiseFamily: string;
  noiseScale: string;
  n: string;
  csvPath: string;
  truthPath: string;
  algorithm: string;
  paramsText: string;
  requiredText: string;
  forbiddenText: string;
  nsMode: "off" | "lasso";
  lambdaNs: string;
  threshold: string;
  seed: string;
}

export function defaultForm(): TaskFormModel {
  return {
    sourceKind: "simulate",
    model: "erdos_renyi",
    d: "10",
    e: "20",
    rank: "",
    weightLo: "0.5",
    weightHi: "2.0",
    graphSeed: "0",
    sem: "linear",
    noiseFamily: "gauss",
    noiseScale: "1.0",
    n: "1000",
    csvPath: "",
    truthPath: "",
    algorithm: "notears",
    paramsText: "{}",
    requiredText: "",
    forbiddenText: "",
    nsMode: "off",
    lambdaNs: "",
    threshold: "",
    seed: "0",
  };
}

/** The ER 10-node / 20-edge linear-Gaussian benchmark setup. */
export function applyBenchmarkPreset(form: TaskFormModel): TaskFormModel {
  return {
    ...form,
    sourceKind: "simulate",
    model: "erdos_renyi",
    d: "10",
    e: "20",
    weightLo: "0.5",
    weightHi: "2.0",
    sem: "linear",
    noiseFamily: "gauss",
    noiseScale: "1.0",
    n: "2000",
    algorithm: "notears",
    paramsText: "{}",
  };
}

function parseNum(raw: string): number | null {
  const s = raw.trim();
  if (s === "") return null;
  const v = Number(s);
  return Number.isFinite(v) ? v : null;
}

function parseInt_(raw: string): number | null {
  const v = parseNum(raw);
  return v !== null && Number.isInteger(v) ? v : null;
}

/**
 * Edge lists are typed as whitespace- or comma-separated "i->j" tokens.
 * Returns the parsed pairs, or an error message for the first bad token.
 */
export function parseEdges(text: string): [number, number][] | string {
  const edges: [number, number][] = [];
  for (const token of text.split(/[\s,]+/)) {
    if (token === "") continue;
    const m = /^(\d+)->(\d+)$/.exec(token);
    if (!m) {
      return `'${token}' is not an i->j edge`;
    }
    edges.push([Number(m[1]), Number(m[2])]);
  }
  return edges;
}

export function fieldErrors(form: TaskFormModel): Record<string, string> {
  const errors: Record<string, string> = {};
  const wantInt = (key: string, raw: string) => {
    const v = parseInt_(raw);
    if (v === null) errors[key] = "must be an integer";
    return v;
  };
  const wantNum = (key: string, raw: string) => {
    const v = parseNum(raw);
    if (v === null) errors[key] = "must be a number";
    return v;
  };

  if (form.sourceKind === "simulate") {
    const d = wantInt("d", form.d);
    const e = wantInt("e", form.e);
    wantInt("n", form.n);
    wantInt("graphSeed", form.graphSeed);
    if (form.rank.trim() !== "" && parseInt_(form.rank) === null) {
      errors.rank = "must be an integer";
    }
    if (form.model === "low_rank" && form.rank.trim() === "") {
      errors.rank = "low_rank needs a rank";
    }
    const lo = wantNum("weightLo", form.weightLo);
    const hi = wantNum("weightHi", form.weightHi);
    if (lo !== null && hi !== null && !(0 < lo && lo < hi)) {
      errors.weightHi = "needs 0 < lo < hi";
    }
    wantNum("noiseScale", form.noiseScale);
    if (d !== null && e !== null) {
      const maxE = (d * (d - 1)) / 2;
      if (e > maxE) errors.e = `at most ${maxE} edges for d=${d}`;
      if (e < 0) errors.e = "must be >= 0";
    }
  } else if (form.csvPath.trim() === "") {
    errors.csvPath = "path is required";
  }

  try {
    const params = JSON.parse(form.paramsText || "{}");
    if (typeof params !== "object" || params === null || Array.isArray(params)) {
      errors.params = "must be a JSON object";
    }
  } catch {
    errors.params = "not valid JSON";
  }

  const required = parseEdges(form.requiredText);
  const forbidden = parseEdges(form.forbiddenText);
  if (typeof required === "string") errors.required = required;
  if (typeof forbidden === "string") errors.forbidden = forbidden;
  if (Array.isArray(required) && Array.isArray(forbidden)) {
    for (const [i, j] of [...required, ...forbidden]) {
      if (i === j) {
        errors[required.some(([a, b]) => a === i && b === j) ? "required" : "forbidden"] =
          "edges must join distinct nodes";
      }
    }
    const req = new Set(required.map(([i, j]) => `${i},${j}`));
    for (const [i, j] of forbidden) {
      if (req.has(`${i},${j}`)) {
        errors.forbidden = `x${i}->x${j} is also required`;
      }
    }
  }

  if (form.nsMode === "lasso") {
    const v = wantNum("lambdaNs", form.lambdaNs);
    if (v !== null && v < 0) errors.lambdaNs = "must be >= 0";
  }
  if (form.threshold.trim() !== "" && parseNum(form.threshold) === null) {
    errors.threshold = "must be a number";
  }
  wantInt("seed", form.seed);
  return errors;
}

/** Assemble the request body; null while any field fails to parse. */
export function toSubmission(form: TaskFormModel): TaskSubmission | null {
  if (Object.keys(fieldErrors(form)).length > 0) {
    return null;
  }
  const required = parseEdges(form.requiredText) as [number, number][];
  const forbidden = parseEdges(form.forbiddenText) as [number, number][];
  const prior: PriorEdges | null =
    required.length || forbidden.length ? { required, forbidden } : null;
  const source =
    form.sourceKind === "simulate"
      ? {
          kind: "simulate" as const,
          graph: {
            model: form.model,
            d: parseInt_(form.d) as number,
            e: parseInt_(form.e) as number,
            rank: form.rank.trim() === "" ? null : (parseInt_(form.rank) as number),
            weight_range: [parseNum(form.weightLo), parseNum(form.weightHi)] as [
              number,
              number,
            ],
            seed: parseInt_(form.graphSeed) as number,
          },
          sem: form.sem,
          noise: { family: form.noiseFamily, scale: parseNum(form.noiseScale) as number },
          n: parseInt_(form.n) as number,
        }
      : {
          kind: "csv" as const,
          path: form.csvPath.trim(),
          truth_path: form.truthPath.trim() === "" ? null : form.truthPath.trim(),
        };
  return {
    schema_version: 1,
    data_source: source,
    algorithm: form.algorithm,
    params: JSON.parse(form.paramsText || "{}"),
    prior,
    neighborhood_selection: {
      mode: form.nsMode,
      lambda_ns: form.nsMode === "lasso" ? (parseNum(form.lambdaNs) as number) : null,
    },
    threshold: form.threshold.trim() === "" ? null : (parseNum(form.threshold) as number),
    seed: parseInt_(form.seed) as number,
  };
}

/** Cross-field problem the per-field checks cannot attribute, or null. */
export function formError(form: TaskFormModel): string | null {
  const body = toSubmission(form);
  if (body === null) return null; // field errors already shown inline
  return validateSubmission(body);
}

export function canSubmit(form: TaskFormModel): boolean {
  const body = toSubmission(form);
  return body !== null && validateSubmission(body) === null;
}
