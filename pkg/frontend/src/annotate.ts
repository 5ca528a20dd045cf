/**
 * Pending edge annotations for a completed task.
 *
 * The model accumulates a require/forbid delta keyed by node pair. A pair
 * can hold one action at a time, so the pending set can never contain a
 * required/forbidden conflict; marking a pair with the opposite action is
 * refused until the existing mark is removed.
 */

import type { PriorEdges } from "./types.js";

export type AnnotationAction = "require" | "forbid";

function key(i: number, j: number): string {
  return `${i},${j}`;
}

export class AnnotationModel {
  private pending = new Map<string, AnnotationAction>();

  /** Mark an edge; returns an error message when the mark is not allowed. */
  add(i: number, j: number, action: AnnotationAction): string | null {
    if (!Number.isInteger(i) || !Number.isInteger(j) || i < 0 || j < 0) {
      return "edge endpoints must be node indices";
    }
    if (i === j) {
      return "an edge must join two distinct nodes";
    }
    const existing = this.pending.get(key(i, j));
    if (existing !== undefined && existing !== action) {
      return `x${i} → x${j} is already marked ${existing}; remove that mark first`;
    }
    this.pending.set(key(i, j), action);
    return null;
  }

  remove(i: number, j: number): void {
    this.pending.delete(key(i, j));
  }

  actionFor(i: number, j: number): AnnotationAction | null {
    return this.pending.get(key(i, j)) ?? null;
  }

  get size(): number {
    return this.pending.size;
  }

  /** Submission is only meaningful with at least one pending mark. */
  canSubmit(): boolean {
    return this.pending.size > 0;
  }

  entries(): { i: number; j: number; action: AnnotationAction }[] {
    return Array.from(this.pending.entries())
      .map(([k, action]) => {
        const [i, j] = k.split(",").map(Number);
        return { i, j, action };
      })
      .sort((a, b) => a.i - b.i || a.j - b.j);
  }

  toDelta(): PriorEdges {
    const delta: PriorEdges = { required: [], forbidden: [] };
    for (const { i, j, action } of this.entries()) {
      (action === "require" ? delta.required : delta.forbidden).push([i, j]);
    }
    return delta;
  }

  clear(): void {
    this.pending.clear();
  }
}
