import { describe, expect, it } from "vitest";

import { AnnotationModel } from "../src/annotate.js";

describe("AnnotationModel", () => {
  it("starts empty with submission disabled", () => {
    const model = new AnnotationModel();
    expect(model.size).toBe(0);
    expect(model.canSubmit()).toBe(false);
    expect(model.toDelta()).toEqual({ required: [], forbidden: [] });
  });

  it("accumulates marks and enables submission", () => {
    const model = new AnnotationModel();
    expect(model.add(0, 1, "forbid")).toBeNull();
    expect(model.add(2, 3, "require")).toBeNull();
    expect(model.canSubmit()).toBe(true);
    expect(model.toDelta()).toEqual({ required: [[2, 3]], forbidden: [[0, 1]] });
  });

  it("blocks require and forbid on the same pair", () => {
    const model = new AnnotationModel();
    model.add(0, 1, "require");
    const err = model.add(0, 1, "forbid");
    expect(err).toMatch(/already marked require/);
    expect(model.actionFor(0, 1)).toBe("require");
    expect(model.toDelta().forbidden).toEqual([]);
  });

  it("allows the opposite mark after removal", () => {
    const model = new AnnotationModel();
    model.add(0, 1, "require");
    model.remove(0, 1);
    expect(model.add(0, 1, "forbid")).toBeNull();
    expect(model.actionFor(0, 1)).toBe("forbid");
  });

  it("treats repeated identical marks as one", () => {
    const model = new AnnotationModel();
    model.add(4, 2, "forbid");
    expect(model.add(4, 2, "forbid")).toBeNull();
    expect(model.size).toBe(1);
  });

  it("rejects self-loops and bad indices", () => {
    const model = new AnnotationModel();
    expect(model.add(3, 3, "forbid")).toMatch(/distinct/);
    expect(model.add(-1, 2, "forbid")).toMatch(/indices/);
    expect(model.add(0.5, 2, "forbid")).toMatch(/indices/);
    expect(model.size).toBe(0);
  });

  it("emits a deterministic, sorted delta", () => {
    const model = new AnnotationModel();
    model.add(3, 0, "forbid");
    model.add(1, 2, "forbid");
    model.add(1, 0, "forbid");
    expect(model.toDelta().forbidden).toEqual([
      [1, 0],
      [1, 2],
      [3, 0],
    ]);
    model.clear();
    expect(model.size).toBe(0);
  });
});
