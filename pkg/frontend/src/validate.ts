/**
 * Client-side submission validation.
 *
 * validateSubmission accepts a candidate body exactly when the server
 * accepts it with 202: the shape layer mirrors the request models (unknown
 * keys rejected, integer fields must be integral, literals exact) and the
 * semantic layer mirrors task-layer validation (algorithm names, parameter
 * ranges, prior consistency). Notable server behaviors mirrored here:
 *
 * - sem is not checked at submission time; a bad mechanism only fails once
 *   the task runs.
 * - prior edges are checked for self-loops and required/forbidden overlap
 *   only; index range and required-edge cycles need the data dimension,
 *   which submission-time validation does not assume.
 * - threshold overrides the omega parameter for notears and golem, so a
 *   nonpositive params.omega is fine when threshold > 0, and threshold = 0
 *   is rejected for those two algorithms but allowed for the rest.
 * - validated numeric parameters reject non-numeric values; unvalidated
 *   ones (equal_variance, prune_threshold) accept anything.
 */

import { ALGORITHMS, GRAPH_MODELS, NOISE_FAMILIES } from "./types.js";

export const PARAM_KEYS: Record<string, readonly string[]> = {
  pc: ["alpha", "variant", "max_condition_size"],
  ges: ["penalty_discount", "max_parents"],
  direct_lingam: ["prune_threshold"],
  notears: ["lambda1", "h_tol", "rho_max", "max_dual_iters", "omega"],
  golem: [
    "lambda1",
    "lambda2",
    "equal_variance",
    "iterations",
    "learning_rate",
    "omega",
  ],
};

const PC_VARIANTS = ["original", "stable"];

type Dict = Record<string, unknown>;

function isObj(v: unknown): v is Dict {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function isNum(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function isInt(v: unknown): v is number {
  return isNum(v) && Number.isInteger(v);
}

function unknownKey(obj: Dict, allowed: string[], where: string): string | null {
  for (const key of Object.keys(obj)) {
    if (!allowed.includes(key)) {
      return `${where}: unknown field ${key}`;
    }
  }
  return null;
}

/** Edge pairs must be two-element integer arrays. */
function checkEdgeList(v: unknown, where: string): string | null {
  if (!Array.isArray(v)) {
    return `${where} must be a list of edge pairs`;
  }
  for (const pair of v) {
    if (!Array.isArray(pair) || pair.length !== 2) {
      return `${where}: each edge must be a [from, to] pair`;
    }
    if (!isInt(pair[0]) || !isInt(pair[1])) {
      return `${where}: edge endpoints must be integers`;
    }
  }
  return null;
}

function checkGraphShape(g: unknown): string | null {
  if (!isObj(g)) {
    return "graph must be an object";
  }
  const bad = unknownKey(g, ["model", "d", "e", "rank", "weight_range", "seed"], "graph");
  if (bad) return bad;
  if ("model" in g && typeof g.model !== "string") return "graph.model must be a string";
  for (const key of ["d", "e", "seed"]) {
    if (key in g && !isInt(g[key])) return `graph.${key} must be an integer`;
  }
  if ("rank" in g && g.rank !== null && !isInt(g.rank)) {
    return "graph.rank must be an integer or null";
  }
  if ("weight_range" in g) {
    const wr = g.weight_range;
    if (!Array.isArray(wr) || wr.length !== 2 || !isNum(wr[0]) || !isNum(wr[1])) {
      return "graph.weight_range must be [lo, hi]";
    }
  }
  return null;
}

function checkSourceShape(src: unknown): string | null {
  if (!isObj(src)) {
    return "data_source must be an object";
  }
  if (src.kind === "simulate") {
    const bad = unknownKey(src, ["kind", "graph", "sem", "noise", "n"], "data_source");
    if (bad) return bad;
    if ("graph" in src) {
      const err = checkGraphShape(src.graph);
      if (err) return err;
    }
    if ("sem" in src && typeof src.sem !== "string") return "sem must be a string";
    if ("noise" in src) {
      const noise = src.noise;
      if (!isObj(noise)) return "noise must be an object";
      const badNoise = unknownKey(noise, ["family", "scale"], "noise");
      if (badNoise) return badNoise;
      if ("family" in noise && typeof noise.family !== "string") {
        return "noise.family must be a string";
      }
      if ("scale" in noise && !isNum(noise.scale)) return "noise.scale must be numeric";
    }
    if ("n" in src && !isInt(src.n)) return "n must be an integer";
    return null;
  }
  if (src.kind === "csv") {
    const bad = unknownKey(src, ["kind", "path", "truth_path"], "data_source");
    if (bad) return bad;
    if (typeof src.path !== "string") return "csv source needs a string path";
    if ("truth_path" in src && src.truth_path !== null && typeof src.truth_path !== "string") {
      return "truth_path must be a string or null";
    }
    return null;
  }
  return "data_source.kind must be 'simulate' or 'csv'";
}

function checkPriorShape(prior: unknown): string | null {
  if (prior === null) return null;
  if (!isObj(prior)) return "prior must be an object or null";
  const bad = unknownKey(prior, ["required", "forbidden"], "prior");
  if (bad) return bad;
  for (const key of ["required", "forbidden"]) {
    if (key in prior) {
      const err = checkEdgeList(prior[key], `prior.${key}`);
      if (err) return err;
    }
  }
  return null;
}

function checkShape(body: Dict): string | null {
  const bad = unknownKey(
    body,
    [
      "schema_version",
      "data_source",
      "algorithm",
      "params",
      "prior",
      "neighborhood_selection",
      "threshold",
      "seed",
    ],
    "submission",
  );
  if (bad) return bad;
  for (const key of ["schema_version", "seed"]) {
    if (key in body && !isInt(body[key])) return `${key} must be an integer`;
  }
  if ("data_source" in body) {
    const err = checkSourceShape(body.data_source);
    if (err) return err;
  }
  if ("algorithm" in body && typeof body.algorithm !== "string") {
    return "algorithm must be a string";
  }
  if ("params" in body && !isObj(body.params)) {
    return "params must be an object";
  }
  if ("prior" in body) {
    const err = checkPriorShape(body.prior);
    if (err) return err;
  }
  if ("neighborhood_selection" in body) {
    const ns = body.neighborhood_selection;
    if (!isObj(ns)) return "neighborhood_selection must be an object";
    const badNs = unknownKey(ns, ["mode", "lambda_ns"], "neighborhood_selection");
    if (badNs) return badNs;
    if ("mode" in ns && ns.mode !== "off" && ns.mode !== "lasso") {
      return "neighborhood mode must be 'off' or 'lasso'";
    }
    if ("lambda_ns" in ns && ns.lambda_ns !== null && !isNum(ns.lambda_ns)) {
      return "lambda_ns must be numeric or null";
    }
  }
  if ("threshold" in body && body.threshold !== null && !isNum(body.threshold)) {
    return "threshold must be numeric or null";
  }
  return null;
}

function checkSimulateSemantics(src: Dict): string | null {
  const g = isObj(src.graph) ? src.graph : {};
  const model = (g.model as string) ?? "erdos_renyi";
  const d = (g.d as number) ?? 10;
  const e = (g.e as number) ?? 20;
  const rank = "rank" in g ? g.rank : null;
  const wr = (g.weight_range as [number, number]) ?? [0.5, 2.0];
  if (!(GRAPH_MODELS as readonly string[]).includes(model)) {
    return `unknown graph model '${model}'`;
  }
  if (d < 1) return "d must be >= 1";
  const maxE = (d * (d - 1)) / 2;
  if (e < 0 || e > maxE) return `e must be in [0, ${maxE}] for d=${d}`;
  if (!(0 < wr[0] && wr[0] < wr[1])) return "weight_range must satisfy 0 < lo < hi";
  if (model === "low_rank") {
    const r = rank as number | null;
    if (r === null || r < 1 || r > d) return "low_rank requires 1 <= rank <= d";
  }
  const noise = isObj(src.noise) ? src.noise : {};
  const family = (noise.family as string) ?? "gauss";
  const scale = (noise.scale as number) ?? 1.0;
  if (!(NOISE_FAMILIES as readonly string[]).includes(family)) {
    return `unknown noise family '${family}'`;
  }
  if (!(scale > 0)) return "noise scale must be > 0";
  const n = (src.n as number) ?? 1000;
  if (n < 1) return "n must be >= 1";
  return null;
}

/** A validated numeric setting: rejects non-numbers and nonpositives. */
function positive(v: unknown): boolean {
  return isNum(v) && v > 0;
}

function checkAlgoParams(
  algorithm: string,
  params: Dict,
  threshold: number | null,
): string | null {
  const allowed = PARAM_KEYS[algorithm];
  for (const key of Object.keys(params)) {
    if (!allowed.includes(key)) {
      return `parameter '${key}' does not belong to algorithm '${algorithm}'`;
    }
  }
  if (algorithm === "pc") {
    const alpha = "alpha" in params ? params.alpha : 0.05;
    if (!isNum(alpha) || !(0 < alpha && alpha < 1)) return "alpha must lie in (0, 1)";
    const variant = "variant" in params ? params.variant : "original";
    if (!PC_VARIANTS.includes(variant as string)) return `unknown PC variant '${variant}'`;
    const mcs = "max_condition_size" in params ? params.max_condition_size : null;
    if (mcs !== null && (!isNum(mcs) || mcs < 0)) {
      return "max_condition_size must be >= 0";
    }
  } else if (algorithm === "ges") {
    const pd = "penalty_discount" in params ? params.penalty_discount : 1.0;
    if (!positive(pd)) return "penalty_discount must be > 0";
    const mp = "max_parents" in params ? params.max_parents : null;
    if (mp !== null && (!isNum(mp) || mp < 0)) return "max_parents must be >= 0";
  } else if (algorithm === "notears" || algorithm === "golem") {
    const keys =
      algorithm === "notears"
        ? ["lambda1", "h_tol", "rho_max", "max_dual_iters"]
        : ["lambda1", "lambda2", "iterations", "learning_rate"];
    for (const key of keys) {
      if (key in params && !positive(params[key])) {
        return `${key} must be positive`;
      }
    }
    // threshold replaces omega before the positivity check runs
    const omega = threshold !== null ? threshold : "omega" in params ? params.omega : 0.3;
    if (!positive(omega)) return "omega must be positive";
  }
  // direct_lingam settings are not validated at submission time
  return null;
}

function checkSemantics(body: Dict): string | null {
  const ns = isObj(body.neighborhood_selection) ? body.neighborhood_selection : {};
  const mode = (ns.mode as string) ?? "off";
  const lambdaNs = mode === "lasso" ? ((ns.lambda_ns as number | null) ?? null) : null;
  if (mode === "lasso" && lambdaNs === null) {
    return "lasso neighborhood selection needs lambda_ns";
  }
  const schemaVersion = (body.schema_version as number) ?? 1;
  if (schemaVersion !== 1) return `unsupported schema_version ${schemaVersion}`;
  const algorithm = (body.algorithm as string) ?? "notears";
  if (!(ALGORITHMS as readonly string[]).includes(algorithm)) {
    return `unknown algorithm '${algorithm}'`;
  }
  const src = isObj(body.data_source) ? body.data_source : { kind: "simulate" };
  if (src.kind === "csv") {
    if (src.path === "") return "csv source needs a path";
  } else {
    const err = checkSimulateSemantics(src);
    if (err) return err;
  }
  const threshold = (body.threshold as number | null) ?? null;
  const params = isObj(body.params) ? body.params : {};
  const paramErr = checkAlgoParams(algorithm, params, threshold);
  if (paramErr) return paramErr;
  if (isObj(body.prior)) {
    const required = (body.prior.required as number[][]) ?? [];
    const forbidden = (body.prior.forbidden as number[][]) ?? [];
    for (const [i, j] of [...required, ...forbidden]) {
      if (i === j) return "prior edges must join distinct nodes";
    }
    const req = new Set(required.map(([i, j]) => `${i},${j}`));
    for (const [i, j] of forbidden) {
      if (req.has(`${i},${j}`)) {
        return `edge (${i}, ${j}) is both required and forbidden`;
      }
    }
  }
  if (lambdaNs !== null && lambdaNs < 0) return "lambda_ns must be >= 0";
  if (threshold !== null && threshold < 0) return "threshold must be >= 0";
  return null;
}

/**
 * Full submission check; returns null when the server would answer 202 and
 * a human-readable reason when it would answer 400.
 */
export function validateSubmission(body: unknown): string | null {
  if (!isObj(body)) {
    return "submission must be a JSON object";
  }
  const shapeErr = checkShape(body);
  if (shapeErr) return shapeErr;
  return checkSemantics(body);
}

export function acceptsSubmission(body: unknown): boolean {
  return validateSubmission(body) === null;
}
