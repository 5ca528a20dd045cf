import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("posts submissions as JSON and returns the created id", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(202, { id: "abc123" }));
    vi.stubGlobal("fetch", fetchMock);
    const api = new ApiClient("http://svc:9000/");
    const created = await api.submitTask({ algorithm: "pc" } as never);
    expect(created).toEqual({ id: "abc123" });
    const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("http://svc:9000/api/tasks");
    expect(init.method).toBe("POST");
    expect((init.headers as Record<string, string>)["content-type"]).toBe(
      "application/json",
    );
    expect(JSON.parse(init.body as string)).toEqual({ algorithm: "pc" });
  });

  it("turns error bodies into typed ApiErrors", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        jsonResponse(404, { error: { code: "unknown_task", message: "no task" } }),
      ),
    );
    const api = new ApiClient();
    const err = await api.getTask("nope").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.code).toBe("unknown_task");
    expect(err.message).toBe("no task");
  });

  it("keeps a usable error when the body is not JSON", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response("<html>boom</html>", { status: 502 })),
    );
    const api = new ApiClient();
    const err = await api.health().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(502);
    expect(err.code).toBe("unknown");
  });

  it("addresses every endpoint under /api", async () => {
    const fetchMock = vi.fn(async (..._args: unknown[]) => jsonResponse(200, {}));
    vi.stubGlobal("fetch", fetchMock);
    const api = new ApiClient();
    await api.health();
    await api.listTasks();
    await api.getTask("t1");
    await api.getResult("t1");
    await api.annotate("t1", { required: [], forbidden: [[0, 1]] });
    await api.deleteTask("t1");
    const urls = fetchMock.mock.calls.map((call) => call[0] as string);
    expect(urls).toEqual([
      "/api/health",
      "/api/tasks",
      "/api/tasks/t1",
      "/api/tasks/t1/result",
      "/api/tasks/t1/annotations",
      "/api/tasks/t1",
    ]);
  });
});
