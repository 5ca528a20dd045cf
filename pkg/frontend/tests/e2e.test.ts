/**
 * End-to-end suite against a live `causalforge serve` instance.
 *
 * Spawns the real server on a random port, then checks the two contracts
 * that only a live round trip can check: the benchmark-preset task runs to
 * done and an annotation rerun excludes the forbidden edge, and the client
 * validator agrees with the server verdict on a 100-config corpus.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import type { Readable } from "node:stream";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { applyBenchmarkPreset, defaultForm, toSubmission } from "../src/form.js";
import { createMonitor } from "../src/monitor.js";
import { acceptsSubmission } from "../src/validate.js";
import { buildCorpus } from "./corpus.js";

const port = 20000 + Math.floor(Math.random() * 20000);
const baseUrl = `http://127.0.0.1:${port}`;

let proc: ChildProcessByStdio<null, Readable, Readable>;
let dataDir: string;
let serverLog = "";

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

async function waitFor(
  cond: () => boolean,
  timeoutMs: number,
  what: string,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!cond()) {
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}\nserver log:\n${serverLog}`);
    }
    await sleep(100);
  }
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "causalforge-e2e-"));
  proc = spawn(
    "causalforge",
    ["serve", "--host", "127.0.0.1", "--port", String(port), "--workers", "2", "--data-dir", dataDir],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  proc.stdout.on("data", (chunk: Buffer) => (serverLog += chunk.toString()));
  proc.stderr.on("data", (chunk: Buffer) => (serverLog += chunk.toString()));

  const deadline = Date.now() + 30_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`server exited early (${proc.exitCode})\n${serverLog}`);
    }
    try {
      const res = await fetch(`${baseUrl}/api/health`);
      if (res.ok) {
        const body = (await res.json()) as { status?: string };
        if (body.status === "ok") break;
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      throw new Error(`server never became healthy\n${serverLog}`);
    }
    await sleep(250);
  }
});

afterAll(async () => {
  if (proc && proc.exitCode === null) {
    proc.kill("SIGTERM");
    const deadline = Date.now() + 5_000;
    while (proc.exitCode === null && Date.now() < deadline) {
      await sleep(100);
    }
    if (proc.exitCode === null) proc.kill("SIGKILL");
  }
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe("live server round trip", () => {
  it("runs the benchmark preset to done and excludes a forbidden edge on rerun", async () => {
    const api = new ApiClient(baseUrl);
    const body = toSubmission(applyBenchmarkPreset(defaultForm()));
    expect(body).not.toBeNull();
    if (!body || body.data_source.kind !== "simulate") {
      throw new Error("preset must be a simulate source");
    }
    expect(body.data_source.graph.d).toBe(10);
    expect(body.data_source.graph.e).toBe(20);
    expect(body.data_source.n).toBe(2000);
    expect(body.algorithm).toBe("notears");

    const { id } = await api.submitTask(body);
    const root = document.createElement("div");
    document.body.appendChild(root);
    const seen = new Set<string>();
    let derivedHash = "";
    const monitor = createMonitor(root, api, id, {
      intervalMs: 150,
      navigate: (hash) => {
        derivedHash = hash;
      },
    });
    const badge = (): string =>
      root.querySelector('[data-role="badge"]')?.textContent ?? "";
    await waitFor(
      () => {
        if (badge()) seen.add(badge());
        return badge() === "done" && root.querySelector(".comparator") !== null;
      },
      150_000,
      "benchmark task to reach done",
    );
    monitor.stop();
    for (const state of seen) {
      expect(["queued", "running", "done"]).toContain(state);
    }

    const result = await api.getResult(id);
    const grids = root.querySelectorAll(".heatmap-grid");
    expect(grids).toHaveLength(2);
    for (const grid of Array.from(grids)) {
      expect(grid.querySelectorAll(".hm-cell")).toHaveLength(100);
      const cols = Array.from(grid.querySelectorAll(".hm-col-label")).map(
        (n) => n.textContent,
      );
      expect(cols).toEqual([...Array(10).keys()].map((i) => `x${i}`));
    }
    expect(result.metrics).not.toBeNull();
    const shdCell = root.querySelector('[data-metric="shd"]') as HTMLElement;
    expect(shdCell.textContent).toBe(String(result.metrics!.shd));
    const f1Cell = root.querySelector('[data-metric="f1"]') as HTMLElement;
    expect(f1Cell.textContent).toBe(String(result.metrics!.f1));
    expect(root.querySelectorAll(".trace-point")).toHaveLength(result.trace.length);
    expect(result.trace.length).toBeGreaterThan(0);

    let ei = -1;
    let ej = -1;
    outer: for (let i = 0; i < 10; i++) {
      for (let j = 0; j < 10; j++) {
        if (result.graph[i][j] === 1) {
          ei = i;
          ej = j;
          break outer;
        }
      }
    }
    expect(ei).toBeGreaterThanOrEqual(0);

    const cell = grids[0].querySelector(
      `.hm-cell[data-i="${ei}"][data-j="${ej}"]`,
    ) as HTMLElement;
    cell.click();
    (root.querySelector('[data-role="forbid"]') as HTMLButtonElement).click();
    expect(
      root.querySelectorAll('[data-role="pending"] li'),
    ).toHaveLength(1);
    (
      root.querySelector('[data-role="submit-annotations"]') as HTMLButtonElement
    ).click();
    await waitFor(() => derivedHash !== "", 10_000, "annotation rerun id");
    const derivedId = derivedHash.replace("#/tasks/", "");
    expect(derivedId).not.toBe(id);
    expect((await api.getTask(derivedId)).parent_id).toBe(id);

    const root2 = document.createElement("div");
    document.body.appendChild(root2);
    const monitor2 = createMonitor(root2, api, derivedId, { intervalMs: 150 });
    await waitFor(
      () =>
        (root2.querySelector('[data-role="badge"]')?.textContent ?? "") === "done" &&
        root2.querySelector(".comparator") !== null,
      150_000,
      "derived task to reach done",
    );
    monitor2.stop();
    const derived = await api.getResult(derivedId);
    expect(derived.graph[ei][ej]).toBe(0);
  });
});

describe("client/server validation parity", () => {
  it("agrees with the server on all 100 corpus configs", async () => {
    const corpus = buildCorpus();
    expect(corpus).toHaveLength(100);
    const accepted: string[] = [];
    const mismatches: string[] = [];
    for (const entry of corpus) {
      const clientOk = acceptsSubmission(entry.body);
      const res = await fetch(`${baseUrl}/api/tasks`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(entry.body),
      });
      const serverOk = res.status === 202;
      if (serverOk) {
        const payload = (await res.json()) as { id: string };
        accepted.push(payload.id);
      } else {
        await res.text();
      }
      if (clientOk !== serverOk) {
        mismatches.push(
          `${entry.note}: client=${clientOk} server=${serverOk} (${res.status})`,
        );
      }
      if (entry.expectValid !== serverOk) {
        mismatches.push(
          `${entry.note}: expected=${entry.expectValid} server=${serverOk}`,
        );
      }
    }
    expect(mismatches).toEqual([]);
    for (const id of accepted) {
      await fetch(`${baseUrl}/api/tasks/${id}`, { method: "DELETE" }).catch(
        () => undefined,
      );
    }
  });
});
