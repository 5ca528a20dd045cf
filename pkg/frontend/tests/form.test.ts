import { describe, expect, it } from "vitest";

import {
  applyBenchmarkPreset,
  canSubmit,
  defaultForm,
  fieldErrors,
  formError,
  parseEdges,
  toSubmission,
} from "../src/form.js";
import type { SimulateSource } from "../src/types.js";

describe("task designer form model", () => {
  it("submits with the defaults", () => {
    const form = defaultForm();
    expect(fieldErrors(form)).toEqual({});
    expect(canSubmit(form)).toBe(true);
    const body = toSubmission(form)!;
    expect(body.algorithm).toBe("notears");
    expect(body.prior).toBeNull();
    expect(body.neighborhood_selection).toEqual({ mode: "off", lambda_ns: null });
  });

  it("benchmark preset fills the reference task", () => {
    const form = applyBenchmarkPreset({ ...defaultForm(), d: "3", algorithm: "pc" });
    expect([form.d, form.e, form.n]).toEqual(["10", "20", "2000"]);
    expect([form.sem, form.noiseFamily, form.algorithm]).toEqual([
      "linear",
      "gauss",
      "notears",
    ]);
    const body = toSubmission(form)!;
    const source = body.data_source as SimulateSource;
    expect(source.graph.d).toBe(10);
    expect(source.graph.e).toBe(20);
    expect(source.graph.weight_range).toEqual([0.5, 2.0]);
    expect(source.sem).toBe("linear");
    expect(source.noise.family).toBe("gauss");
    expect(source.n).toBe(2000);
    expect(body.algorithm).toBe("notears");
  });

  it("flags an edge count beyond d(d-1)/2 inline and blocks submission", () => {
    const form = { ...defaultForm(), d: "10", e: "50" };
    const errs = fieldErrors(form);
    expect(errs.e).toMatch(/at most 45/);
    expect(canSubmit(form)).toBe(false);
    expect(toSubmission(form)).toBeNull();
  });

  it("validates numeric fields individually", () => {
    const form = { ...defaultForm(), d: "ten", weightLo: "x", seed: "1.5" };
    const errs = fieldErrors(form);
    expect(errs.d).toBeDefined();
    expect(errs.weightLo).toBeDefined();
    expect(errs.seed).toBeDefined();
  });

  it("orders the weight range", () => {
    const errs = fieldErrors({ ...defaultForm(), weightLo: "2.0", weightHi: "0.5" });
    expect(errs.weightHi).toMatch(/lo < hi/);
  });

  it("switches to csv mode with its own requirements", () => {
    const form = { ...defaultForm(), sourceKind: "csv" as const };
    expect(fieldErrors(form).csvPath).toBeDefined();
    const ok = { ...form, csvPath: "data/X.csv" };
    expect(fieldErrors(ok)).toEqual({});
    const body = toSubmission(ok)!;
    expect(body.data_source).toEqual({
      kind: "csv",
      path: "data/X.csv",
      truth_path: null,
    });
    const withTruth = toSubmission({ ...ok, truthPath: "data/B.json" })!;
    expect((withTruth.data_source as { truth_path: string }).truth_path).toBe(
      "data/B.json",
    );
  });

  it("parses prior edge lists and catches conflicts", () => {
    expect(parseEdges("")).toEqual([]);
    expect(parseEdges("0->1, 2->3 4->0")).toEqual([
      [0, 1],
      [2, 3],
      [4, 0],
    ]);
    expect(parseEdges("0-1")).toMatch(/not an i->j edge/);
    const conflicted = {
      ...defaultForm(),
      requiredText: "0->1",
      forbiddenText: "0->1",
    };
    expect(fieldErrors(conflicted).forbidden).toMatch(/also required/);
    const loop = { ...defaultForm(), forbiddenText: "2->2" };
    expect(fieldErrors(loop).forbidden).toMatch(/distinct/);
    const body = toSubmission({ ...defaultForm(), forbiddenText: "0->1" })!;
    expect(body.prior).toEqual({ required: [], forbidden: [[0, 1]] });
  });

  it("rejects bad parameter JSON inline", () => {
    expect(fieldErrors({ ...defaultForm(), paramsText: "{nope" }).params).toBeDefined();
    expect(fieldErrors({ ...defaultForm(), paramsText: "[1]" }).params).toBeDefined();
  });

  it("needs lambda when lasso is chosen", () => {
    const form = { ...defaultForm(), nsMode: "lasso" as const };
    expect(fieldErrors(form).lambdaNs).toBeDefined();
    expect(fieldErrors({ ...form, lambdaNs: "-1" }).lambdaNs).toBeDefined();
    const ok = { ...form, lambdaNs: "0.05" };
    expect(fieldErrors(ok)).toEqual({});
    expect(toSubmission(ok)!.neighborhood_selection).toEqual({
      mode: "lasso",
      lambda_ns: 0.05,
    });
  });

  it("surfaces cross-field problems through formError", () => {
    const form = { ...defaultForm(), algorithm: "pc", paramsText: '{"alpha": 2}' };
    expect(fieldErrors(form)).toEqual({});
    expect(formError(form)).toMatch(/alpha/);
    expect(canSubmit(form)).toBe(false);
  });

  it("keeps rank empty unless the model needs it", () => {
    expect(toSubmission(defaultForm())!.data_source).toMatchObject({
      graph: { rank: null },
    });
    const lowRank = { ...defaultForm(), model: "low_rank" };
    expect(fieldErrors(lowRank).rank).toMatch(/needs a rank/);
    const ok = { ...lowRank, rank: "2" };
    expect(fieldErrors(ok)).toEqual({});
    expect((toSubmission(ok)!.data_source as SimulateSource).graph.rank).toBe(2);
  });
});
